//! Exact algebra of order ideals, filters, and downward/upward-closed subsets
//! of `N^d` under the componentwise order.
//!
//! An order ideal of `N^d` is represented by a vector over `N ∪ {w}` where the
//! top element `w` (omega) marks an unbounded component. A downward-closed set
//! is kept as the antichain of its maximal ideals (its canonical
//! decomposition); an upward-closed set as the antichain of its minimal
//! generators. All integers are unbounded.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

/// Unbounded natural number.
pub type Nat = BigUint;

/// Returned when two vectors or sets of different lengths are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("dimension mismatch: {left} vs {right}")]
pub struct DimMismatch {
    pub left: usize,
    pub right: usize,
}

fn check_dim(left: usize, right: usize) -> Result<(), DimMismatch> {
    if left == right {
        Ok(())
    } else {
        Err(DimMismatch { left, right })
    }
}

/// A natural number extended with the top element omega.
///
/// The derived `Ord` is the order of `N ∪ {w}`: finite values compare as
/// naturals and `Omega` is strictly above every finite value.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OmegaNat {
    Fin(Nat),
    Omega,
}

impl OmegaNat {
    pub fn is_omega(&self) -> bool {
        matches!(self, OmegaNat::Omega)
    }

    pub fn as_finite(&self) -> Option<&Nat> {
        match self {
            OmegaNat::Fin(n) => Some(n),
            OmegaNat::Omega => None,
        }
    }

    /// Componentwise difference with a finite subtrahend; `w - n = w`.
    /// `None` when the finite value would go negative.
    pub fn checked_sub(&self, rhs: &Nat) -> Option<OmegaNat> {
        match self {
            OmegaNat::Omega => Some(OmegaNat::Omega),
            OmegaNat::Fin(n) => {
                if n >= rhs {
                    Some(OmegaNat::Fin(n - rhs))
                } else {
                    None
                }
            }
        }
    }

    /// Product by a finite scalar with `0 * w = 0` and `k * w = w` for `k >= 1`.
    pub fn scale(&self, k: &Nat) -> OmegaNat {
        if k.is_zero() {
            return OmegaNat::Fin(Nat::zero());
        }
        match self {
            OmegaNat::Omega => OmegaNat::Omega,
            OmegaNat::Fin(n) => OmegaNat::Fin(n * k),
        }
    }

    /// Addition where omega absorbs: `w + x = x + w = w`.
    pub fn add(&self, rhs: &OmegaNat) -> OmegaNat {
        match (self, rhs) {
            (OmegaNat::Fin(a), OmegaNat::Fin(b)) => OmegaNat::Fin(a + b),
            _ => OmegaNat::Omega,
        }
    }
}

impl From<Nat> for OmegaNat {
    fn from(n: Nat) -> Self {
        OmegaNat::Fin(n)
    }
}

impl From<u64> for OmegaNat {
    fn from(n: u64) -> Self {
        OmegaNat::Fin(Nat::from(n))
    }
}

impl fmt::Display for OmegaNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OmegaNat::Fin(n) => write!(f, "{n}"),
            OmegaNat::Omega => write!(f, "w"),
        }
    }
}

/// A configuration of `N^d`, also the generator of the principal filter above it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NatVec {
    comps: Vec<Nat>,
}

impl NatVec {
    pub fn new(comps: Vec<Nat>) -> Self {
        NatVec { comps }
    }

    pub fn from_u64s(comps: &[u64]) -> Self {
        NatVec::new(comps.iter().map(|&c| Nat::from(c)).collect())
    }

    pub fn zeros(len: usize) -> Self {
        NatVec::new(vec![Nat::zero(); len])
    }

    /// `value * e_i`: `value` at position `i`, zero elsewhere.
    pub fn unit(len: usize, i: usize, value: Nat) -> Self {
        let mut comps = vec![Nat::zero(); len];
        comps[i] = value;
        NatVec::new(comps)
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn comps(&self) -> &[Nat] {
        &self.comps
    }

    pub fn get(&self, i: usize) -> &Nat {
        &self.comps[i]
    }

    /// Largest component (zero for the empty vector).
    pub fn norm(&self) -> Nat {
        self.comps.iter().max().cloned().unwrap_or_else(Nat::zero)
    }

    /// Componentwise order on `N^d`.
    pub fn leq(&self, other: &NatVec) -> Result<bool, DimMismatch> {
        check_dim(self.len(), other.len())?;
        Ok(self.leq_raw(other))
    }

    pub(crate) fn leq_raw(&self, other: &NatVec) -> bool {
        self.comps.iter().zip(&other.comps).all(|(a, b)| a <= b)
    }

    /// Componentwise maximum (join of the two principal filters).
    pub fn join(&self, other: &NatVec) -> Result<NatVec, DimMismatch> {
        check_dim(self.len(), other.len())?;
        Ok(NatVec::new(
            self.comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a.max(b).clone())
                .collect(),
        ))
    }

    /// The ideal with the same (finite) components.
    pub fn to_ideal(&self) -> OmegaVec {
        OmegaVec::new(self.comps.iter().cloned().map(OmegaNat::Fin).collect())
    }

    pub(crate) fn cmp_lex(&self, other: &NatVec) -> Ordering {
        self.comps.cmp(&other.comps)
    }
}

impl fmt::Display for NatVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.comps.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// An order ideal of `N^d`, as a vector over `N ∪ {w}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OmegaVec {
    comps: Vec<OmegaNat>,
}

impl OmegaVec {
    pub fn new(comps: Vec<OmegaNat>) -> Self {
        OmegaVec { comps }
    }

    /// The full space `N^len`, i.e. `(w,...,w)`.
    pub fn full(len: usize) -> Self {
        OmegaVec::new(vec![OmegaNat::Omega; len])
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn comps(&self) -> &[OmegaNat] {
        &self.comps
    }

    pub fn get(&self, i: usize) -> &OmegaNat {
        &self.comps[i]
    }

    /// Indices of omega components (0-based).
    pub fn omega_set(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.comps[i].is_omega()).collect()
    }

    /// Indices of finite components (0-based).
    pub fn fin_set(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| !self.comps[i].is_omega()).collect()
    }

    /// Number of omega components (`dim I`).
    pub fn dim(&self) -> usize {
        self.comps.iter().filter(|c| c.is_omega()).count()
    }

    /// Number of finite components (`fdim I`).
    pub fn fdim(&self) -> usize {
        self.len() - self.dim()
    }

    /// Largest finite component; zero when every component is omega.
    pub fn norm(&self) -> Nat {
        self.comps
            .iter()
            .filter_map(|c| c.as_finite())
            .max()
            .cloned()
            .unwrap_or_else(Nat::zero)
    }

    /// Ideal inclusion: `I ⊆ J` as subsets of `N^d` iff componentwise `I(i) <= J(i)`.
    pub fn leq(&self, other: &OmegaVec) -> Result<bool, DimMismatch> {
        check_dim(self.len(), other.len())?;
        Ok(self.leq_raw(other))
    }

    pub(crate) fn leq_raw(&self, other: &OmegaVec) -> bool {
        self.comps.iter().zip(&other.comps).all(|(a, b)| a <= b)
    }

    /// Intersection of two ideals: the componentwise minimum.
    pub fn meet(&self, other: &OmegaVec) -> Result<OmegaVec, DimMismatch> {
        check_dim(self.len(), other.len())?;
        Ok(OmegaVec::new(
            self.comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a.min(b).clone())
                .collect(),
        ))
    }

    /// Membership of a configuration: `v ∈ ↓I`.
    pub fn contains(&self, v: &NatVec) -> Result<bool, DimMismatch> {
        check_dim(self.len(), v.len())?;
        Ok(self.contains_raw(v))
    }

    pub(crate) fn contains_raw(&self, v: &NatVec) -> bool {
        self.comps.iter().zip(v.comps()).all(|(c, x)| match c {
            OmegaNat::Omega => true,
            OmegaNat::Fin(n) => x <= n,
        })
    }

    /// Minimal basis of `N^d \ I`: the filters `↑((I(i)+1)·e_i)` for finite `i`.
    pub fn complement(&self) -> UpSet {
        let d = self.len();
        let mut basis: Vec<NatVec> = self
            .fin_set()
            .into_iter()
            .map(|i| {
                let bound = self.comps[i].as_finite().expect("finite index") + Nat::one();
                NatVec::unit(d, i, bound)
            })
            .collect();
        // unit vectors on distinct coordinates are pairwise incomparable
        basis.sort_by(|a, b| a.cmp_lex(b));
        UpSet::from_sorted_antichain(d, basis)
    }

    pub(crate) fn cmp_lex(&self, other: &OmegaVec) -> Ordering {
        self.comps.cmp(&other.comps)
    }
}

impl fmt::Display for OmegaVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.comps.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A downward-closed subset of `N^d` as the antichain of its maximal ideals.
///
/// The ideal list is kept sorted, so structural equality is equality of
/// canonical decompositions. An empty ideal list denotes the empty set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DownSet {
    dim: usize,
    ideals: Vec<OmegaVec>,
}

impl DownSet {
    /// The empty downward-closed set.
    pub fn empty(dim: usize) -> Self {
        DownSet { dim, ideals: Vec::new() }
    }

    /// The full space `N^dim`.
    pub fn full(dim: usize) -> Self {
        DownSet { dim, ideals: vec![OmegaVec::full(dim)] }
    }

    /// Canonicalize an arbitrary union of ideals: drop every ideal contained
    /// in another, keeping an antichain of maximal ideals.
    pub fn from_ideals(dim: usize, ideals: Vec<OmegaVec>) -> Result<Self, DimMismatch> {
        for i in &ideals {
            check_dim(dim, i.len())?;
        }
        let mut sorted = ideals;
        sorted.sort_by(|a, b| a.cmp_lex(b));
        sorted.dedup();
        let kept: Vec<OmegaVec> = sorted
            .iter()
            .filter(|i| !sorted.iter().any(|j| *i != j && i.leq_raw(j)))
            .cloned()
            .collect();
        Ok(DownSet { dim, ideals: kept })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ideals(&self) -> &[OmegaVec] {
        &self.ideals
    }

    /// True for the empty downward-closed set.
    pub fn is_empty_set(&self) -> bool {
        self.ideals.is_empty()
    }

    /// Largest finite component over all member ideals (zero for the empty set).
    pub fn norm(&self) -> Nat {
        self.ideals.iter().map(|i| i.norm()).max().unwrap_or_else(Nat::zero)
    }

    /// Membership: some maximal ideal contains `v`.
    pub fn contains(&self, v: &NatVec) -> Result<bool, DimMismatch> {
        check_dim(self.dim, v.len())?;
        Ok(self.ideals.iter().any(|i| i.contains_raw(v)))
    }

    /// Exact membership of an ideal in the canonical decomposition.
    pub fn has_member_ideal(&self, ideal: &OmegaVec) -> bool {
        self.ideals.iter().any(|i| i == ideal)
    }

    /// Set inclusion `self ⊆ other`.
    pub fn subset_of(&self, other: &DownSet) -> Result<bool, DimMismatch> {
        check_dim(self.dim, other.dim)?;
        Ok(self
            .ideals
            .iter()
            .all(|i| other.ideals.iter().any(|j| i.leq_raw(j))))
    }

    /// Canonical decomposition of the set intersection, via pairwise meets.
    pub fn intersect(&self, other: &DownSet) -> Result<DownSet, DimMismatch> {
        check_dim(self.dim, other.dim)?;
        let mut meets = Vec::with_capacity(self.ideals.len() * other.ideals.len());
        for i in &self.ideals {
            for j in &other.ideals {
                meets.push(i.meet(j)?);
            }
        }
        DownSet::from_ideals(self.dim, meets)
    }

    /// Minimal basis of the complement `N^d \ self`.
    ///
    /// Distributes the per-ideal complements, joining one filter generator
    /// per ideal, and keeps the minimal joins. Partial joins that already
    /// dominate an emitted candidate are pruned, and an ideal whose
    /// complement requirement is already met by the partial join contributes
    /// no increase.
    pub fn complement(&self) -> UpSet {
        if self.ideals.is_empty() {
            return UpSet::full(self.dim);
        }
        let mut minimal: Vec<NatVec> = Vec::new();
        let mut current = NatVec::zeros(self.dim);
        self.complement_rec(0, &mut current, &mut minimal);
        minimal.sort_by(|a, b| a.cmp_lex(b));
        UpSet::from_sorted_antichain(self.dim, minimal)
    }

    fn complement_rec(&self, level: usize, current: &mut NatVec, minimal: &mut Vec<NatVec>) {
        if minimal.iter().any(|m| m.leq_raw(current)) {
            return;
        }
        if level == self.ideals.len() {
            minimal.retain(|m| !current.leq_raw(m));
            minimal.push(current.clone());
            return;
        }
        let ideal = &self.ideals[level];
        let fin = ideal.fin_set();
        // requirement already satisfied: raising any component is never minimal
        let satisfied = fin.iter().any(|&i| match &ideal.comps()[i] {
            OmegaNat::Fin(n) => current.get(i) > n,
            OmegaNat::Omega => false,
        });
        if satisfied {
            self.complement_rec(level + 1, current, minimal);
            return;
        }
        for &i in &fin {
            let bound = ideal.comps()[i].as_finite().expect("finite index") + Nat::one();
            let saved = current.get(i).clone();
            debug_assert!(saved < bound);
            current.comps[i] = bound;
            self.complement_rec(level + 1, current, minimal);
            current.comps[i] = saved;
        }
        // an ideal with no finite component is the full space: dead branch
    }
}

impl fmt::Display for DownSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ideals.is_empty() {
            return write!(f, "{{}}");
        }
        write!(f, "{{")?;
        for (i, ideal) in self.ideals.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{ideal}")?;
        }
        write!(f, "}}")
    }
}

/// An upward-closed subset of `N^d` as its minimal basis.
///
/// The basis is kept sorted and mutually incomparable. An empty basis denotes
/// the empty set; the basis `{0^d}` denotes the full space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpSet {
    dim: usize,
    basis: Vec<NatVec>,
}

impl UpSet {
    /// The empty upward-closed set.
    pub fn empty(dim: usize) -> Self {
        UpSet { dim, basis: Vec::new() }
    }

    /// The full space, generated by the zero vector.
    pub fn full(dim: usize) -> Self {
        UpSet { dim, basis: vec![NatVec::zeros(dim)] }
    }

    /// Minimize an arbitrary set of generators to an antichain of minimal ones.
    pub fn from_vectors(dim: usize, vectors: Vec<NatVec>) -> Result<Self, DimMismatch> {
        for v in &vectors {
            check_dim(dim, v.len())?;
        }
        let mut sorted = vectors;
        sorted.sort_by(|a, b| a.cmp_lex(b));
        sorted.dedup();
        let kept: Vec<NatVec> = sorted
            .iter()
            .filter(|v| !sorted.iter().any(|w| *v != w && w.leq_raw(v)))
            .cloned()
            .collect();
        Ok(UpSet { dim, basis: kept })
    }

    fn from_sorted_antichain(dim: usize, basis: Vec<NatVec>) -> Self {
        debug_assert!(basis
            .iter()
            .all(|v| v.len() == dim && basis.iter().filter(|w| v.leq_raw(w)).count() == 1));
        UpSet { dim, basis }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[NatVec] {
        &self.basis
    }

    pub fn is_empty_set(&self) -> bool {
        self.basis.is_empty()
    }

    /// Largest component over the basis (zero for the empty set).
    pub fn norm(&self) -> Nat {
        self.basis.iter().map(|v| v.norm()).max().unwrap_or_else(Nat::zero)
    }

    /// Membership: some basis vector lies below `v`.
    pub fn contains(&self, v: &NatVec) -> Result<bool, DimMismatch> {
        check_dim(self.dim, v.len())?;
        Ok(self.basis.iter().any(|b| b.leq_raw(v)))
    }

    /// Set inclusion `self ⊆ other`.
    pub fn subset_of(&self, other: &UpSet) -> Result<bool, DimMismatch> {
        check_dim(self.dim, other.dim)?;
        Ok(self
            .basis
            .iter()
            .all(|v| other.basis.iter().any(|w| w.leq_raw(v))))
    }

    /// Canonical decomposition of the complement `N^d \ ↑basis`.
    ///
    /// Per basis vector `b`, the complement of `↑b` is the union over
    /// coordinates with `b(i) >= 1` of the ideal with `b(i)-1` at `i` and
    /// omega elsewhere; the results are intersected across the basis.
    pub fn complement(&self) -> DownSet {
        let mut result = DownSet::full(self.dim);
        for b in &self.basis {
            let mut pieces = Vec::new();
            for i in 0..self.dim {
                if !b.get(i).is_zero() {
                    let mut comps = vec![OmegaNat::Omega; self.dim];
                    comps[i] = OmegaNat::Fin(b.get(i) - Nat::one());
                    pieces.push(OmegaVec::new(comps));
                }
            }
            let piece_set =
                DownSet::from_ideals(self.dim, pieces).expect("complement pieces share dim");
            result = result.intersect(&piece_set).expect("dims agree");
            if result.is_empty_set() {
                break;
            }
        }
        result
    }
}

impl fmt::Display for UpSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.basis.is_empty() {
            return write!(f, "{{}}");
        }
        write!(f, "{{")?;
        for (i, v) in self.basis.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn nat(n: u64) -> Nat {
        Nat::from(n)
    }

    /// "1 4" or "w 3" -> OmegaVec
    fn ov(spec: &str) -> OmegaVec {
        OmegaVec::new(
            spec.split_whitespace()
                .map(|t| {
                    if t == "w" {
                        OmegaNat::Omega
                    } else {
                        OmegaNat::Fin(t.parse::<Nat>().unwrap())
                    }
                })
                .collect(),
        )
    }

    fn nv(spec: &str) -> NatVec {
        NatVec::new(spec.split_whitespace().map(|t| t.parse::<Nat>().unwrap()).collect())
    }

    fn downset(specs: &[&str]) -> DownSet {
        let ideals: Vec<OmegaVec> = specs.iter().map(|s| ov(s)).collect();
        let dim = ideals.first().map(|i| i.len()).unwrap_or(0);
        DownSet::from_ideals(dim, ideals).unwrap()
    }

    fn upset(specs: &[&str]) -> UpSet {
        let vs: Vec<NatVec> = specs.iter().map(|s| nv(s)).collect();
        let dim = vs.first().map(|v| v.len()).unwrap_or(0);
        UpSet::from_vectors(dim, vs).unwrap()
    }

    /// Brute-force membership over a grid: v in D?
    fn grid(dim: usize, max: u64) -> Vec<NatVec> {
        let mut out = vec![Vec::new()];
        for _ in 0..dim {
            let mut next = Vec::new();
            for prefix in &out {
                for c in 0..=max {
                    let mut p = prefix.clone();
                    p.push(nat(c));
                    next.push(p);
                }
            }
            out = next;
        }
        out.into_iter().map(NatVec::new).collect()
    }

    #[test]
    fn leq_examples() {
        assert!(ov("1 4").leq(&ov("w 4")).unwrap());
        assert!(!ov("w 3").leq(&ov("1 4")).unwrap());
        let i = ov("3 w 2");
        assert!(i.leq(&i).unwrap());
        assert_eq!(
            ov("1 2").leq(&ov("1 2 3")),
            Err(DimMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn leq_entails_omega_set_inclusion() {
        let i = ov("1 4");
        let j = ov("w 4");
        assert!(i.leq(&j).unwrap());
        let oi = i.omega_set();
        let oj = j.omega_set();
        assert!(oi.iter().all(|x| oj.contains(x)));
    }

    #[test]
    fn meet_examples() {
        assert_eq!(ov("w 4").meet(&ov("1 w")).unwrap(), ov("1 4"));
        assert_eq!(ov("w 4").meet(&ov("w 3")).unwrap(), ov("w 3"));
        let i = ov("2 w 5");
        assert_eq!(i.meet(&i).unwrap(), i);
    }

    #[test]
    fn meet_is_intersection_on_grid() {
        let i = ov("w 4");
        let j = ov("1 w");
        let m = i.meet(&j).unwrap();
        for v in grid(2, 5) {
            assert_eq!(
                m.contains(&v).unwrap(),
                i.contains(&v).unwrap() && j.contains(&v).unwrap()
            );
        }
    }

    #[test]
    fn canonicalize_examples() {
        assert_eq!(downset(&["1 4", "w 4"]).ideals(), downset(&["w 4"]).ideals());
        let d = downset(&["1 4", "w 3"]);
        assert_eq!(d.ideals().len(), 2);
        let empty = DownSet::from_ideals(2, vec![]).unwrap();
        assert!(empty.is_empty_set());
    }

    #[test]
    fn intersect_reproduces_first_halving_step() {
        let d0 = downset(&["w 4"]);
        let pre = downset(&["1 w", "w 3"]);
        let d1 = d0.intersect(&pre).unwrap();
        assert_eq!(d1, downset(&["1 4", "w 3"]));
        // brute-force agreement
        for v in grid(2, 10) {
            if v.get(1) > &nat(5) {
                continue;
            }
            assert_eq!(
                d1.contains(&v).unwrap(),
                d0.contains(&v).unwrap() && pre.contains(&v).unwrap()
            );
        }
    }

    #[test]
    fn intersect_with_full_and_empty() {
        let d = downset(&["1 4", "w 3"]);
        assert_eq!(d.intersect(&DownSet::full(2)).unwrap(), d);
        assert!(d.intersect(&DownSet::empty(2)).unwrap().is_empty_set());
    }

    #[test]
    fn downset_contains_final_halving_set() {
        let d5 = downset(&["1 4", "3 3", "5 2", "7 1", "9 0"]);
        assert!(d5.contains(&nv("9 0")).unwrap());
        assert!(!d5.contains(&nv("10 0")).unwrap());
        assert!(d5.contains(&nv("1 4")).unwrap());
        assert!(d5.contains(&nv("0 0")).unwrap());
    }

    #[test]
    fn ideal_complement_examples() {
        assert_eq!(ov("1 4").complement(), upset(&["2 0", "0 5"]));
        assert!(OmegaVec::full(3).complement().is_empty_set());
        assert_eq!(ov("0 w").complement(), upset(&["1 0"]));
    }

    #[test]
    fn ideal_complement_on_grid() {
        let i = ov("1 4");
        let c = i.complement();
        for v in grid(2, 6) {
            assert_eq!(c.contains(&v).unwrap(), !i.contains(&v).unwrap());
        }
    }

    #[test]
    fn downset_complement_on_halving_sets() {
        let d1 = downset(&["1 4", "w 3"]);
        assert_eq!(d1.complement(), upset(&["0 5", "2 4"]));
        let d0 = downset(&["w 4"]);
        assert_eq!(d0.complement(), upset(&["0 5"]));
        assert!(DownSet::full(2).complement().is_empty_set());
        assert_eq!(DownSet::empty(3).complement(), UpSet::full(3));
    }

    // The four-dimensional worked example: the candidate (2,7,7,7) is not
    // minimal in the complement because (2,0,7,7) lies below it in U.
    #[test]
    fn downset_complement_excludes_dominated_candidate() {
        let d = downset(&["1 4 6 7", "2 6 4 8", "3 1 7 6", "3 1 7 6", "4 5 3 0"]);
        let u = d.complement();
        let rogue = nv("2 7 7 7");
        assert!(!u.basis().contains(&rogue));
        let below = nv("2 0 7 7");
        assert!(!d.contains(&below).unwrap());
        assert!(u.contains(&below).unwrap());
        assert!(below.leq(&rogue).unwrap());
        // expected basis computed by brute-force minimal non-members over {0..10}^4
        let expected = upset(&[
            "0 0 0 9", "0 0 5 8", "0 0 7 7", "0 0 8 0", "0 2 7 0", "0 5 5 0", "0 7 0 0",
            "2 0 5 7", "2 2 5 0", "3 0 0 7", "3 2 0 1", "3 2 4 0", "3 6 0 0", "4 0 0 1",
            "4 0 4 0", "5 0 0 0",
        ]);
        assert_eq!(u, expected);
    }

    #[test]
    fn upset_complement_examples() {
        assert_eq!(upset(&["0 5", "2 4"]).complement(), downset(&["1 4", "w 3"]));
        assert_eq!(upset(&["0 5"]).complement(), downset(&["w 4"]));
        assert!(UpSet::full(2).complement().is_empty_set());
        assert_eq!(UpSet::empty(2).complement(), DownSet::full(2));
    }

    #[test]
    fn upset_minimize_examples() {
        assert_eq!(upset(&["2 4", "3 4"]).basis(), &[nv("2 4")]);
        assert_eq!(upset(&["0 5", "2 4"]).basis().len(), 2);
        assert!(UpSet::from_vectors(2, vec![]).unwrap().is_empty_set());
    }

    fn arb_omega_vec(dim: usize, max: u64) -> impl Strategy<Value = OmegaVec> {
        proptest::collection::vec(
            prop_oneof![
                (0..=max).prop_map(|n| OmegaNat::Fin(Nat::from(n))),
                Just(OmegaNat::Omega),
            ],
            dim,
        )
        .prop_map(OmegaVec::new)
    }

    fn arb_downset(dim: usize) -> impl Strategy<Value = DownSet> {
        proptest::collection::vec(arb_omega_vec(dim, 4), 0..5)
            .prop_map(move |is| DownSet::from_ideals(dim, is).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn downsets_are_antichains(d in arb_downset(3)) {
            for i in d.ideals() {
                for j in d.ideals() {
                    prop_assert!(i == j || !i.leq(j).unwrap());
                }
            }
        }

        #[test]
        fn complement_partitions_grid(d in arb_downset(3)) {
            let u = d.complement();
            for v in grid(3, 6) {
                prop_assert_eq!(d.contains(&v).unwrap(), !u.contains(&v).unwrap());
            }
        }

        #[test]
        fn complement_involution(d in arb_downset(3)) {
            prop_assert_eq!(d.complement().complement(), d);
        }

        #[test]
        fn meet_is_greatest_lower_bound(
            i in arb_omega_vec(3, 4),
            j in arb_omega_vec(3, 4),
            k in arb_omega_vec(3, 4),
        ) {
            let m = i.meet(&j).unwrap();
            prop_assert!(m.leq(&i).unwrap());
            prop_assert!(m.leq(&j).unwrap());
            if k.leq(&i).unwrap() && k.leq(&j).unwrap() {
                prop_assert!(k.leq(&m).unwrap());
            }
        }

        #[test]
        fn intersect_membership_is_conjunction(d1 in arb_downset(2), d2 in arb_downset(2)) {
            let meet = d1.intersect(&d2).unwrap();
            for v in grid(2, 6) {
                prop_assert_eq!(
                    meet.contains(&v).unwrap(),
                    d1.contains(&v).unwrap() && d2.contains(&v).unwrap()
                );
            }
        }

        #[test]
        fn leq_omega_sets(i in arb_omega_vec(3, 4), j in arb_omega_vec(3, 4)) {
            if i.leq(&j).unwrap() {
                let oi = i.omega_set();
                let oj = j.omega_set();
                prop_assert!(oi.iter().all(|x| oj.contains(x)));
                if i.dim() == j.dim() {
                    prop_assert_eq!(oi, oj);
                }
            }
        }
    }
}
