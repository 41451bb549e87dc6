//! Control functions, the `(N_i, L_i)` bound tables they induce, and the
//! thinness tests for ideals and near-thinness tests for configurations.
//!
//! For a monotone expansive control `g` with initial size `n0` and dimension
//! `d`, the tables are
//!
//! ```text
//! N_0 = n0        N_{i+1} = g^{L_i + 1}(n0)
//! L_0 = 0         L_{i+1} = L_i + prod_{1 <= j <= i+1} (d - j + 1)(N_j + 1)
//! ```
//!
//! `L` is strictly increasing and `N` non-decreasing. An ideal is thin when
//! its finite components can be matched bijectively below `N_1..N_fdim`; a
//! configuration is nearly thin when its components fit below `N_i + 1` under
//! some permutation. Everything is exact over unbounded integers: the tables
//! overflow 64 bits already for small dimensions.

use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::ideal::{DimMismatch, Nat, NatVec, OmegaVec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error(transparent)]
    Dim(#[from] DimMismatch),
    #[error("control function is not monotone at sample ({x}, {y})")]
    NotMonotone { x: Nat, y: Nat },
    #[error("control function is not expansive at sample {x}")]
    NotExpansive { x: Nat },
    #[error("iterate count {k} is too large for an opaque control function")]
    IterateTooLarge { k: Nat },
    #[error("size bounds must be non-decreasing")]
    SizeBoundsNotMonotone,
}

enum ControlFn {
    /// `g(x) = x + step`, iterated in closed form.
    Affine { step: Nat },
    /// An opaque monotone expansive function; iterates are memoized.
    General {
        g: Arc<dyn Fn(&Nat) -> Nat + Send + Sync>,
        iterates: Mutex<Vec<Nat>>,
    },
}

/// A control `(g, n0)`: a monotone expansive `g: N -> N` with initial size `n0`.
pub struct Control {
    f: ControlFn,
    n0: Nat,
}

impl Control {
    /// The affine control `g(x) = x + step`.
    pub fn affine(step: Nat, n0: Nat) -> Self {
        Control { f: ControlFn::Affine { step }, n0 }
    }

    /// An arbitrary control function. Monotonicity and expansiveness are
    /// spot-checked on a handful of sample points; iteration is sequential,
    /// so tables are only practical for small dimensions.
    pub fn general(
        g: impl Fn(&Nat) -> Nat + Send + Sync + 'static,
        n0: Nat,
    ) -> Result<Self, BoundsError> {
        let samples: Vec<Nat> =
            [0u64, 1, 2, 3, 5, 10, 100, 1000].iter().map(|&x| Nat::from(x)).collect();
        for x in &samples {
            if g(x) < *x {
                return Err(BoundsError::NotExpansive { x: x.clone() });
            }
        }
        for pair in samples.windows(2) {
            if g(&pair[0]) > g(&pair[1]) {
                return Err(BoundsError::NotMonotone { x: pair[0].clone(), y: pair[1].clone() });
            }
        }
        Ok(Control {
            f: ControlFn::General { g: Arc::new(g), iterates: Mutex::new(Vec::new()) },
            n0,
        })
    }

    pub fn n0(&self) -> &Nat {
        &self.n0
    }

    /// The affine step, when the control is affine.
    pub fn affine_step(&self) -> Option<&Nat> {
        match &self.f {
            ControlFn::Affine { step } => Some(step),
            ControlFn::General { .. } => None,
        }
    }

    /// `g^k(n0)`.
    pub fn iterate(&self, k: &Nat) -> Result<Nat, BoundsError> {
        match &self.f {
            ControlFn::Affine { step } => Ok(&self.n0 + k * step),
            ControlFn::General { g, iterates } => {
                let k = k
                    .to_usize()
                    .ok_or_else(|| BoundsError::IterateTooLarge { k: k.clone() })?;
                let mut cache = iterates.lock().expect("iterate cache poisoned");
                if cache.is_empty() {
                    cache.push(self.n0.clone());
                }
                while cache.len() <= k {
                    let next = g(cache.last().expect("cache non-empty"));
                    cache.push(next);
                }
                Ok(cache[k].clone())
            }
        }
    }

    pub fn iterate_usize(&self, k: usize) -> Result<Nat, BoundsError> {
        self.iterate(&Nat::from(k))
    }
}

impl Clone for Control {
    fn clone(&self) -> Self {
        let f = match &self.f {
            ControlFn::Affine { step } => ControlFn::Affine { step: step.clone() },
            ControlFn::General { g, iterates } => ControlFn::General {
                g: Arc::clone(g),
                iterates: Mutex::new(iterates.lock().expect("iterate cache poisoned").clone()),
            },
        };
        Control { f, n0: self.n0.clone() }
    }
}

impl fmt::Debug for Control {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.f {
            ControlFn::Affine { step } => {
                write!(f, "Control(g(x) = x + {step}, n0 = {})", self.n0)
            }
            ControlFn::General { .. } => write!(f, "Control(general, n0 = {})", self.n0),
        }
    }
}

impl fmt::Display for Control {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.f {
            ControlFn::Affine { step } => write!(f, "g(x) = x + {step}, n0 = {}", self.n0),
            ControlFn::General { .. } => write!(f, "g opaque, n0 = {}", self.n0),
        }
    }
}

/// `prod_{1 <= j <= upto} (d - j + 1)(N_j + 1)`, the count of distinct
/// candidates added at each table level.
fn growth_product(sizes: &[Nat], d: usize, upto: usize) -> Nat {
    (1..=upto).map(|j| Nat::from(d - j + 1) * (&sizes[j] + Nat::one())).product()
}

/// The size bounds `N_0..N_d` and length bounds `L_0..L_d` of a control.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundTable {
    d: usize,
    n: Vec<Nat>,
    l: Vec<Nat>,
}

impl BoundTable {
    /// Evaluate the recurrences exactly for dimension `d`.
    pub fn build(control: &Control, d: usize) -> Result<Self, BoundsError> {
        let mut n = vec![control.n0().clone()];
        let mut l = vec![Nat::zero()];
        for i in 0..d {
            let next_n = control.iterate(&(&l[i] + Nat::one()))?;
            n.push(next_n);
            l.push(&l[i] + growth_product(&n, d, i + 1));
        }
        let table = BoundTable { d, n, l };
        // the affine identity N_{i+1} = n (L_i + 2) when g(x) = x + n, n0 = n
        if let Some(step) = control.affine_step() {
            if step == control.n0() {
                for i in 0..d {
                    assert_eq!(
                        table.n[i + 1],
                        step * (&table.l[i] + Nat::from(2u32)),
                        "bound table violates the affine identity at {i}"
                    );
                }
            }
        }
        Ok(table)
    }

    /// Build a table directly from the size bounds `N_0..N_d`, deriving the
    /// `L_i` by the recurrence. Intended for experiments with hypothetical
    /// size bounds that do not come from a control function.
    pub fn from_size_bounds(n: Vec<Nat>) -> Result<Self, BoundsError> {
        assert!(!n.is_empty(), "size bounds need at least N_0");
        if n.windows(2).any(|w| w[0] > w[1]) {
            return Err(BoundsError::SizeBoundsNotMonotone);
        }
        let d = n.len() - 1;
        let mut l = vec![Nat::zero()];
        for i in 0..d {
            l.push(&l[i] + growth_product(&n, d, i + 1));
        }
        Ok(BoundTable { d, n, l })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// `N_0..N_d`.
    pub fn sizes(&self) -> &[Nat] {
        &self.n
    }

    /// `L_0..L_d`.
    pub fn lengths(&self) -> &[Nat] {
        &self.l
    }

    /// Thinness of an order ideal: some bijection from its finite components
    /// into `{1..fdim}` stays below the `N_i`. Since `N` is non-decreasing,
    /// sorting the finite components and matching them in order decides this.
    pub fn is_thin(&self, ideal: &OmegaVec) -> Result<bool, BoundsError> {
        if ideal.len() != self.d {
            return Err(DimMismatch { left: self.d, right: ideal.len() }.into());
        }
        let mut fin: Vec<&Nat> = ideal
            .comps()
            .iter()
            .filter_map(|c| c.as_finite())
            .collect();
        fin.sort();
        Ok(fin.iter().zip(&self.n[1..]).all(|(v, n)| *v <= n))
    }

    /// Near thinness of a configuration: a permutation fits every component
    /// below `N_i + 1`. Same sorted-greedy decision.
    pub fn is_nearly_thin(&self, v: &NatVec) -> Result<bool, BoundsError> {
        if v.len() != self.d {
            return Err(DimMismatch { left: self.d, right: v.len() }.into());
        }
        let mut comps: Vec<&Nat> = v.comps().iter().collect();
        comps.sort();
        Ok(comps.iter().zip(&self.n[1..]).all(|(c, n)| **c <= n + Nat::one()))
    }

    /// Upper bound `1 + L_d` on the number of thin order ideals of `N^d`.
    pub fn thin_ideal_count_bound(&self) -> Nat {
        Nat::one() + self.l[self.d].clone()
    }

    /// Upper bound `d! prod (N_i + 2)` on the number of nearly thin filters.
    pub fn filter_count_bound(&self) -> Nat {
        let mut out = Nat::one();
        for i in 1..=self.d {
            out *= Nat::from(i) * (&self.n[i] + Nat::from(2u32));
        }
        out
    }

    /// JSON dump with decimal strings for the unbounded integers.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "d": self.d,
            "N": self.n.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "L": self.l.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "thin_ideal_bound": self.thin_ideal_count_bound().to_string(),
            "nearly_thin_filter_bound": self.filter_count_bound().to_string(),
        })
    }
}

impl fmt::Display for BoundTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:>3}  {:>24}  {:>24}", "i", "N_i", "L_i")?;
        for i in 0..=self.d {
            writeln!(f, "{:>3}  {:>24}  {:>24}", i, self.n[i].to_string(), self.l[i].to_string())?;
        }
        writeln!(f, "thin-ideal bound:          {}", self.thin_ideal_count_bound())?;
        write!(f, "nearly-thin filter bound:  {}", self.filter_count_bound())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::OmegaNat;
    use proptest::prelude::*;

    fn nat(n: u64) -> Nat {
        Nat::from(n)
    }

    fn nats(spec: &[u64]) -> Vec<Nat> {
        spec.iter().map(|&x| nat(x)).collect()
    }

    fn ov(spec: &str) -> OmegaVec {
        OmegaVec::new(
            spec.split_whitespace()
                .map(|t| if t == "w" { OmegaNat::Omega } else { OmegaNat::Fin(t.parse().unwrap()) })
                .collect(),
        )
    }

    #[test]
    fn iterate_examples() {
        let c = Control::affine(nat(1), nat(4));
        assert_eq!(c.iterate(&nat(3)).unwrap(), nat(7));
        assert_eq!(c.iterate(&nat(0)).unwrap(), nat(4));
        let c2 = Control::affine(nat(2), nat(5));
        assert_eq!(c2.iterate(&nat(11)).unwrap(), nat(27));
    }

    #[test]
    fn general_control_matches_affine() {
        let g = Control::general(|x| x + Nat::from(3u32), nat(2)).unwrap();
        let a = Control::affine(nat(3), nat(2));
        for k in 0..20u64 {
            assert_eq!(g.iterate(&nat(k)).unwrap(), a.iterate(&nat(k)).unwrap());
        }
    }

    #[test]
    fn general_control_rejects_bad_functions() {
        assert!(matches!(
            Control::general(|x| if x.is_zero() { Nat::zero() } else { x - Nat::one() }, nat(1)),
            Err(BoundsError::NotExpansive { .. })
        ));
    }

    /// Second, naive evaluation of the recurrences: honest step-by-step
    /// iteration of g and explicit product loops.
    #[allow(clippy::needless_range_loop)]
    fn naive_table(step: u64, n0: u64, d: usize) -> (Vec<Nat>, Vec<Nat>) {
        let mut n = vec![nat(n0)];
        let mut l = vec![nat(0)];
        for i in 0..d {
            let mut x = nat(n0);
            let mut count = nat(0);
            let target = &l[i] + nat(1);
            while count < target {
                x += nat(step);
                count += nat(1);
            }
            n.push(x);
            let mut prod = nat(1);
            for j in 1..=i + 1 {
                prod *= nat((d - j + 1) as u64) * (&n[j] + nat(1));
            }
            let next = &l[i] + prod;
            l.push(next);
        }
        (n, l)
    }

    #[test]
    fn table_example() {
        let t = BoundTable::build(&Control::affine(nat(2), nat(2)), 2).unwrap();
        assert_eq!(t.sizes(), &nats(&[2, 4, 24]));
        assert_eq!(t.lengths(), &nats(&[0, 10, 260]));
        let (n, l) = naive_table(2, 2, 2);
        assert_eq!(t.sizes(), &n);
        assert_eq!(t.lengths(), &l);
    }

    #[test]
    fn table_dim_zero() {
        let t = BoundTable::build(&Control::affine(nat(3), nat(7)), 0).unwrap();
        assert_eq!(t.sizes(), &nats(&[7]));
        assert_eq!(t.lengths(), &nats(&[0]));
        assert_eq!(t.thin_ideal_count_bound(), nat(1));
        assert_eq!(t.filter_count_bound(), nat(1));
    }

    #[test]
    fn general_control_builds_the_same_table() {
        let opaque = Control::general(|x| x + Nat::from(2u32), nat(2)).unwrap();
        let affine = Control::affine(nat(2), nat(2));
        assert_eq!(
            BoundTable::build(&opaque, 2).unwrap(),
            BoundTable::build(&affine, 2).unwrap()
        );
    }

    #[test]
    fn table_matches_naive_on_more_controls() {
        for (step, n0, d) in [(1u64, 4u64, 3usize), (2, 5, 2), (3, 1, 3), (5, 5, 2)] {
            let t = BoundTable::build(&Control::affine(nat(step), nat(n0)), d).unwrap();
            let (n, l) = naive_table(step, n0, d);
            assert_eq!(t.sizes(), &n, "N for ({step},{n0},{d})");
            assert_eq!(t.lengths(), &l, "L for ({step},{n0},{d})");
        }
    }

    #[test]
    fn affine_identity_and_growth_bound() {
        // g(x) = x + n with n0 = n: N_{i+1} = n (L_i + 2), and
        // L_i + 4 <= n^(3^i (lg d + 1)) for n = d = 2
        let n = 2u64;
        let t = BoundTable::build(&Control::affine(nat(n), nat(n)), 2).unwrap();
        for i in 0..2 {
            assert_eq!(t.sizes()[i + 1], nat(n) * (&t.lengths()[i] + nat(2)));
        }
        for (i, l) in t.lengths().iter().enumerate() {
            let exponent = 3u32.pow(i as u32) * 2;
            assert!(l + nat(4) <= nat(n).pow(exponent));
        }
    }

    #[test]
    fn monotonicity_of_tables() {
        for (step, n0, d) in [(0u64, 3u64, 4usize), (2, 2, 4), (7, 1, 3)] {
            let t = BoundTable::build(&Control::affine(nat(step), nat(n0)), d).unwrap();
            assert_eq!(t.sizes()[0], nat(n0));
            assert_eq!(t.lengths()[0], nat(0));
            for i in 0..d {
                assert!(t.lengths()[i] < t.lengths()[i + 1]);
                assert!(t.sizes()[i] <= t.sizes()[i + 1]);
                assert!(nat(n0) <= t.sizes()[i]);
            }
        }
    }

    /// The hypothetical size bounds of the worked four-dimensional example.
    fn example_table() -> BoundTable {
        BoundTable::from_size_bounds(nats(&[2, 2, 4, 6, 8])).unwrap()
    }

    #[test]
    fn thinness_examples() {
        let t = example_table();
        assert!(t.is_thin(&ov("2 6 4 8")).unwrap());
        assert!(t.is_thin(&ov("w w w w")).unwrap());
        assert!(!t.is_thin(&ov("3 3 w w")).unwrap());
    }

    #[test]
    fn nearly_thin_examples() {
        let t = example_table();
        assert!(!t.is_nearly_thin(&NatVec::from_u64s(&[2, 7, 7, 7])).unwrap());
        assert!(t.is_nearly_thin(&NatVec::from_u64s(&[2, 0, 7, 7])).unwrap());
        assert!(t.is_nearly_thin(&NatVec::zeros(4)).unwrap());
    }

    #[test]
    fn count_bounds() {
        let t = BoundTable::build(&Control::affine(nat(2), nat(2)), 2).unwrap();
        assert_eq!(t.thin_ideal_count_bound(), nat(261));
        assert_eq!(t.filter_count_bound(), nat(312));
        let one_dim = BoundTable::from_size_bounds(nats(&[4, 4])).unwrap();
        assert_eq!(one_dim.filter_count_bound(), nat(6));
        assert!(t.thin_ideal_count_bound() >= nat(1));
    }

    #[test]
    fn json_dump_uses_decimal_strings() {
        let t = BoundTable::build(&Control::affine(nat(2), nat(2)), 2).unwrap();
        let json = t.to_json();
        assert_eq!(json["N"][2], "24");
        assert_eq!(json["L"][2], "260");
        assert_eq!(json["thin_ideal_bound"], "261");
    }

    /// Exhaustive bijection search, the oracle for the sorted-greedy decision.
    fn thin_by_bijections(table: &BoundTable, ideal: &OmegaVec) -> bool {
        fn assign(fin: &[&Nat], used: &mut Vec<bool>, n: &[Nat], pos: usize) -> bool {
            if pos == fin.len() {
                return true;
            }
            for slot in 0..fin.len() {
                if !used[slot] && *fin[pos] <= n[slot + 1] {
                    used[slot] = true;
                    if assign(fin, used, n, pos + 1) {
                        return true;
                    }
                    used[slot] = false;
                }
            }
            false
        }
        let fin: Vec<&Nat> = ideal.comps().iter().filter_map(|c| c.as_finite()).collect();
        let mut used = vec![false; fin.len()];
        assign(&fin, &mut used, table.sizes(), 0)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn greedy_thinness_equals_bijection_search(
            comps in proptest::collection::vec(0u64..=11, 4),
            omegas in proptest::collection::vec(proptest::bool::ANY, 4),
        ) {
            let t = example_table();
            let ideal = OmegaVec::new(
                (0..4)
                    .map(|i| if omegas[i] { OmegaNat::Omega } else { OmegaNat::from(comps[i]) })
                    .collect(),
            );
            prop_assert_eq!(t.is_thin(&ideal).unwrap(), thin_by_bijections(&t, &ideal));
        }

        #[test]
        fn thinness_is_antitone_at_fixed_omega_set(
            comps in proptest::collection::vec(0u64..=9, 4),
            shrink in proptest::collection::vec(0u64..=9, 4),
            omegas in proptest::collection::vec(proptest::bool::ANY, 4),
        ) {
            let t = example_table();
            let larger = OmegaVec::new(
                (0..4)
                    .map(|i| if omegas[i] { OmegaNat::Omega } else { OmegaNat::from(comps[i]) })
                    .collect(),
            );
            let smaller = OmegaVec::new(
                (0..4)
                    .map(|i| if omegas[i] {
                        OmegaNat::Omega
                    } else {
                        OmegaNat::from(comps[i].saturating_sub(shrink[i]))
                    })
                    .collect(),
            );
            prop_assert!(smaller.leq(&larger).unwrap());
            prop_assert_eq!(smaller.dim(), larger.dim());
            if t.is_thin(&larger).unwrap() {
                prop_assert!(t.is_thin(&smaller).unwrap());
            }
        }

        #[test]
        fn affine_identity_randomized(n in 2u64..=6, d in 2usize..=6) {
            let t = BoundTable::build(&Control::affine(nat(n), nat(n)), d).unwrap();
            for i in 0..d {
                prop_assert_eq!(
                    t.sizes()[i + 1].clone(),
                    nat(n) * (&t.lengths()[i] + nat(2))
                );
            }
        }
    }
}
