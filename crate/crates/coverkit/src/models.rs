//! Vector addition systems and affine nets: syntax, semantics, classification,
//! and the forward/backward step operators used by the coverability engine.
//!
//! A VAS is a finite set of actions in `Z^d` applied to configurations in
//! `N^d` under a non-negativity guard. An affine net transition `(a, M, b)`
//! maps `u` to `M(u - a) + b` whenever `u - a` stays in `N^d`; all entries of
//! `a`, `M`, `b` are naturals. VAS embed into affine nets with identity
//! matrices.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::ideal::{DimMismatch, Nat, NatVec, OmegaNat, OmegaVec};

/// Unbounded signed integer (VAS action entries).
pub type Int = BigInt;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error(transparent)]
    Dim(#[from] DimMismatch),
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("matrix is not {expected}x{expected}")]
    BadMatrixShape { expected: usize },
}

/// A vector addition system: a finite set of actions in `Z^d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vas {
    dim: usize,
    actions: Vec<Vec<Int>>,
}

impl Vas {
    pub fn new(dim: usize, actions: Vec<Vec<Int>>) -> Result<Self, ModelError> {
        if dim == 0 {
            return Err(ModelError::ZeroDimension);
        }
        for a in &actions {
            if a.len() != dim {
                return Err(DimMismatch { left: dim, right: a.len() }.into());
            }
        }
        Ok(Vas { dim, actions })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn actions(&self) -> &[Vec<Int>] {
        &self.actions
    }

    /// `max |a(i)|` over all actions and components; zero when empty.
    pub fn norm(&self) -> Nat {
        self.actions
            .iter()
            .flat_map(|a| a.iter().map(|c| c.abs().to_biguint().expect("abs is non-negative")))
            .max()
            .unwrap_or_else(Nat::zero)
    }

    /// Forward step `u -> u + a`, undefined when a component would go negative.
    pub fn step(&self, u: &NatVec, action: &[Int]) -> Result<Option<NatVec>, ModelError> {
        if action.len() != self.dim {
            return Err(DimMismatch { left: self.dim, right: action.len() }.into());
        }
        if u.len() != self.dim {
            return Err(DimMismatch { left: self.dim, right: u.len() }.into());
        }
        let mut out = Vec::with_capacity(self.dim);
        for (c, a) in u.comps().iter().zip(action) {
            let sum = BigInt::from(c.clone()) + a;
            match sum.to_biguint() {
                Some(n) => out.push(n),
                None => return Ok(None),
            }
        }
        Ok(Some(NatVec::new(out)))
    }

    /// All forward successors of `u`.
    pub fn successors(&self, u: &NatVec) -> Result<Vec<NatVec>, ModelError> {
        let mut out = Vec::new();
        for a in &self.actions {
            if let Some(v) = self.step(u, a)? {
                out.push(v);
            }
        }
        Ok(out)
    }

    /// Embed into an affine net: action `a` becomes `(max(-a,0), I, max(a,0))`.
    pub fn to_affine(&self) -> AffineNet {
        let transitions = self
            .actions
            .iter()
            .map(|a| {
                let guard: Vec<Nat> = a
                    .iter()
                    .map(|c| {
                        if c.sign() == Sign::Minus {
                            (-c).to_biguint().expect("negated negative is positive")
                        } else {
                            Nat::zero()
                        }
                    })
                    .collect();
                let offset: Vec<Nat> =
                    a.iter().map(|c| c.to_biguint().unwrap_or_else(Nat::zero)).collect();
                AffineTransition::new(
                    NatVec::new(guard),
                    identity_matrix(self.dim),
                    NatVec::new(offset),
                )
                .expect("shapes agree by construction")
            })
            .collect();
        AffineNet::new(self.dim, transitions).expect("dimension is positive")
    }
}

/// The unique minimal `u` with `u + a >= v` and `u + a` in `N^d`, namely
/// `max(v - a, 0)` componentwise.
pub fn vas_pre_min(action: &[Int], v: &NatVec) -> Result<NatVec, ModelError> {
    if action.len() != v.len() {
        return Err(DimMismatch { left: action.len(), right: v.len() }.into());
    }
    let comps = v
        .comps()
        .iter()
        .zip(action)
        .map(|(c, a)| {
            let diff = BigInt::from(c.clone()) - a;
            diff.to_biguint().unwrap_or_else(Nat::zero)
        })
        .collect();
    Ok(NatVec::new(comps))
}

pub fn identity_matrix(dim: usize) -> Vec<Vec<Nat>> {
    (0..dim)
        .map(|i| (0..dim).map(|j| if i == j { Nat::one() } else { Nat::zero() }).collect())
        .collect()
}

/// One affine net transition `(a, M, b)`: `u -> M(u - a) + b` when `u >= a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineTransition {
    guard: NatVec,
    matrix: Vec<Vec<Nat>>,
    offset: NatVec,
}

impl AffineTransition {
    pub fn new(guard: NatVec, matrix: Vec<Vec<Nat>>, offset: NatVec) -> Result<Self, ModelError> {
        let dim = guard.len();
        if dim == 0 {
            return Err(ModelError::ZeroDimension);
        }
        if offset.len() != dim {
            return Err(DimMismatch { left: dim, right: offset.len() }.into());
        }
        if matrix.len() != dim || matrix.iter().any(|row| row.len() != dim) {
            return Err(ModelError::BadMatrixShape { expected: dim });
        }
        Ok(AffineTransition { guard, matrix, offset })
    }

    pub fn dim(&self) -> usize {
        self.guard.len()
    }

    pub fn guard(&self) -> &NatVec {
        &self.guard
    }

    pub fn matrix(&self) -> &[Vec<Nat>] {
        &self.matrix
    }

    pub fn offset(&self) -> &NatVec {
        &self.offset
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.iter().enumerate().all(|(i, row)| {
            row.iter().enumerate().all(|(j, c)| if i == j { c.is_one() } else { c.is_zero() })
        })
    }

    /// Forward step; `None` when the guard fails.
    pub fn apply(&self, u: &NatVec) -> Result<Option<NatVec>, ModelError> {
        if u.len() != self.dim() {
            return Err(DimMismatch { left: self.dim(), right: u.len() }.into());
        }
        if !self.guard.leq_raw(u) {
            return Ok(None);
        }
        let shifted: Vec<Nat> =
            u.comps().iter().zip(self.guard.comps()).map(|(c, a)| c - a).collect();
        let out = self
            .matrix
            .iter()
            .zip(self.offset.comps())
            .map(|(row, b)| row.iter().zip(&shifted).map(|(m, x)| m * x).sum::<Nat>() + b)
            .collect();
        Ok(Some(NatVec::new(out)))
    }

    /// Minimal elements of `Pre_exists(↑v)` through this transition.
    ///
    /// With `y(i) = max(v(i) - b(i), 0)`, the result is `{x + a}` over the
    /// minimal solutions `x` of `M x >= y`; minimal solutions satisfy
    /// `‖x‖ <= ‖y‖`, so the search is a lexicographic walk over the box
    /// `{0..‖y‖}^d` with domination pruning. Empty when no solution exists.
    pub fn pre_min(&self, v: &NatVec) -> Result<Vec<NatVec>, ModelError> {
        if v.len() != self.dim() {
            return Err(DimMismatch { left: self.dim(), right: v.len() }.into());
        }
        let d = self.dim();
        let y: Vec<Nat> = v
            .comps()
            .iter()
            .zip(self.offset.comps())
            .map(|(c, b)| if c >= b { c - b } else { Nat::zero() })
            .collect();
        if y.iter().all(|c| c.is_zero()) {
            return Ok(vec![self.guard.clone()]);
        }
        // a row of zeroes against a positive demand is unsatisfiable
        for (row, yi) in self.matrix.iter().zip(&y) {
            if !yi.is_zero() && row.iter().all(|c| c.is_zero()) {
                return Ok(Vec::new());
            }
        }
        let bound = y.iter().max().cloned().expect("dim >= 1");
        let mut minimal: Vec<Vec<Nat>> = Vec::new();
        let mut x = vec![Nat::zero(); d];
        'walk: loop {
            // lexicographic order visits every dominator of x after x, so a
            // solution not above an earlier one is minimal for good
            let dominates_found = minimal.iter().any(|m| m.iter().zip(&x).all(|(a, b)| a <= b));
            if !dominates_found && self.satisfies(&x, &y) {
                minimal.push(x.clone());
            }
            let mut i = d;
            while i > 0 {
                i -= 1;
                if x[i] < bound {
                    x[i] += Nat::one();
                    for c in &mut x[i + 1..] {
                        *c = Nat::zero();
                    }
                    continue 'walk;
                }
            }
            break;
        }
        let mut out: Vec<NatVec> = minimal
            .into_iter()
            .map(|m| NatVec::new(m.iter().zip(self.guard.comps()).map(|(a, b)| a + b).collect()))
            .collect();
        out.sort_by(|a, b| a.cmp_lex(b));
        Ok(out)
    }

    fn satisfies(&self, x: &[Nat], y: &[Nat]) -> bool {
        self.matrix
            .iter()
            .zip(y)
            .all(|(row, yi)| &row.iter().zip(x).map(|(m, c)| m * c).sum::<Nat>() >= yi)
    }

    /// Image of an ideal: `M(I - a) + b` under omega arithmetic, defined when
    /// `I >= a`. Omega scales by `k * w = w` for `k >= 1` and `0 * w = 0`, and
    /// absorbs under addition.
    pub fn post_ideal(&self, ideal: &OmegaVec) -> Result<Option<OmegaVec>, ModelError> {
        if ideal.len() != self.dim() {
            return Err(DimMismatch { left: self.dim(), right: ideal.len() }.into());
        }
        let mut shifted = Vec::with_capacity(self.dim());
        for (c, a) in ideal.comps().iter().zip(self.guard.comps()) {
            match c.checked_sub(a) {
                Some(x) => shifted.push(x),
                None => return Ok(None),
            }
        }
        let out = self
            .matrix
            .iter()
            .zip(self.offset.comps())
            .map(|(row, b)| {
                let sum = row
                    .iter()
                    .zip(&shifted)
                    .fold(OmegaNat::Fin(Nat::zero()), |acc, (m, x)| acc.add(&x.scale(m)));
                sum.add(&OmegaNat::Fin(b.clone()))
            })
            .collect();
        Ok(Some(OmegaVec::new(out)))
    }
}

/// A well-structured affine net: a finite set of transitions over `N^d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineNet {
    dim: usize,
    transitions: Vec<AffineTransition>,
}

impl AffineNet {
    pub fn new(dim: usize, transitions: Vec<AffineTransition>) -> Result<Self, ModelError> {
        if dim == 0 {
            return Err(ModelError::ZeroDimension);
        }
        for t in &transitions {
            if t.dim() != dim {
                return Err(DimMismatch { left: dim, right: t.dim() }.into());
            }
        }
        Ok(AffineNet { dim, transitions })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn transitions(&self) -> &[AffineTransition] {
        &self.transitions
    }

    /// `max ‖a‖` over the guards; entries of `M` and `b` are not counted.
    pub fn norm(&self) -> Nat {
        self.transitions.iter().map(|t| t.guard.norm()).max().unwrap_or_else(Nat::zero)
    }

    /// All forward successors of a configuration.
    pub fn successors(&self, u: &NatVec) -> Result<Vec<NatVec>, ModelError> {
        let mut out = Vec::new();
        for t in &self.transitions {
            if let Some(v) = t.apply(u)? {
                out.push(v);
            }
        }
        Ok(out)
    }

    /// Structural classification, exact over the rationals for invertibility.
    pub fn classify(&self) -> NetClass {
        let identity = identity_matrix(self.dim);
        let mut class = NetClass {
            is_vas: true,
            is_reset: true,
            is_transfer: true,
            is_strongly_increasing: true,
            is_invertible: true,
        };
        for t in &self.transitions {
            let m = &t.matrix;
            class.is_vas &= *m == identity;
            class.is_reset &= m
                .iter()
                .zip(&identity)
                .all(|(row, id)| row.iter().zip(id).all(|(c, e)| c <= e));
            class.is_transfer &=
                (0..self.dim).all(|j| m.iter().map(|row| row[j].clone()).sum::<Nat>().is_one());
            class.is_strongly_increasing &= m
                .iter()
                .zip(&identity)
                .all(|(row, id)| row.iter().zip(id).all(|(c, e)| c >= e));
            class.is_invertible &= !matrix_determinant(m).is_zero();
        }
        class
    }
}

/// Structural flags of an affine net. On the empty net all flags hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NetClass {
    pub is_vas: bool,
    pub is_reset: bool,
    pub is_transfer: bool,
    pub is_strongly_increasing: bool,
    pub is_invertible: bool,
}

impl fmt::Display for NetClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let yesno = |b: bool| if b { "yes" } else { "no" };
        writeln!(f, "vas:                 {}", yesno(self.is_vas))?;
        writeln!(f, "reset:               {}", yesno(self.is_reset))?;
        writeln!(f, "transfer:            {}", yesno(self.is_transfer))?;
        writeln!(f, "strongly-increasing: {}", yesno(self.is_strongly_increasing))?;
        write!(f, "invertible:          {}", yesno(self.is_invertible))
    }
}

/// Exact determinant of a square natural matrix, by Bareiss fraction-free
/// elimination over the integers.
pub fn matrix_determinant(matrix: &[Vec<Nat>]) -> Int {
    let rows: Vec<Vec<Int>> =
        matrix.iter().map(|row| row.iter().map(|c| Int::from(c.clone())).collect()).collect();
    bareiss_determinant(rows)
}

fn bareiss_determinant(mut m: Vec<Vec<Int>>) -> Int {
    let n = m.len();
    if n == 0 {
        return Int::one();
    }
    debug_assert!(m.iter().all(|row| row.len() == n));
    let mut sign = Int::one();
    let mut prev = Int::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return Int::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                debug_assert!((&num % &prev).is_zero());
                m[i][j] = num / &prev;
            }
            m[i][k] = Int::zero();
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// A coverability model: either a VAS or a general affine net.
///
/// The engine treats VAS natively (closed-form minimal predecessors) and
/// affine nets through minimal-solution enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Model {
    Vas(Vas),
    Affine(AffineNet),
}

impl Model {
    pub fn dim(&self) -> usize {
        match self {
            Model::Vas(v) => v.dim(),
            Model::Affine(n) => n.dim(),
        }
    }

    pub fn norm(&self) -> Nat {
        match self {
            Model::Vas(v) => v.norm(),
            Model::Affine(n) => n.norm(),
        }
    }

    /// The affine-net semantics of the model.
    pub fn to_affine(&self) -> AffineNet {
        match self {
            Model::Vas(v) => v.to_affine(),
            Model::Affine(n) => n.clone(),
        }
    }

    pub fn as_vas(&self) -> Option<&Vas> {
        match self {
            Model::Vas(v) => Some(v),
            Model::Affine(_) => None,
        }
    }

    /// Generators of `Pre_exists(↑v)` over all actions or transitions
    /// (not yet minimized across them).
    pub fn pre_min(&self, v: &NatVec) -> Result<Vec<NatVec>, ModelError> {
        let mut out = Vec::new();
        match self {
            Model::Vas(vas) => {
                for a in vas.actions() {
                    out.push(vas_pre_min(a, v)?);
                }
            }
            Model::Affine(net) => {
                for t in net.transitions() {
                    out.extend(t.pre_min(v)?);
                }
            }
        }
        Ok(out)
    }

    pub fn successors(&self, u: &NatVec) -> Result<Vec<NatVec>, ModelError> {
        match self {
            Model::Vas(v) => v.successors(u),
            Model::Affine(n) => n.successors(u),
        }
    }
}
