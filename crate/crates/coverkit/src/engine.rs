//! The backward coverability algorithm in its classical and dual views, with
//! chain recording, structural monitors, and witness extraction.
//!
//! Classical view: ascending filters `U_0 = ↑t`, `U_{k+1} = U_k ∪ Pre(U_k)`
//! until stabilization at `U*`, the set of configurations covering the
//! target. Dual view: descending downward-closed sets `D_k = N^d \ U_k`,
//! computed natively on canonical ideal decompositions by complementing,
//! taking minimal predecessors, re-complementing, and intersecting. Both
//! views record full `(U_k, D_k)` snapshots so that the monitors (control,
//! monotonicity, thinness, length bounds) can run post-hoc on the chain.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use crate::bounds::{BoundTable, BoundsError, Control};
use crate::ideal::{DimMismatch, DownSet, Nat, NatVec, OmegaVec, UpSet};
use crate::models::{Model, ModelError};

/// Resource limits for a fixpoint run. Exceeding one aborts with a distinct
/// status; it never produces a wrong verdict.
#[derive(Debug, Clone)]
pub struct EngineConfig {
    /// Maximum number of fixpoint iterations.
    pub max_iterations: usize,
    /// Maximum number of ideals in a decomposition or vectors in a basis.
    pub max_set_size: usize,
    /// Abort when any recorded norm exceeds this value.
    pub max_norm: Option<Nat>,
    /// Parallelism degree for per-step Pre computations (1 = sequential).
    pub jobs: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            max_iterations: 100_000,
            max_set_size: 1_000_000,
            max_norm: None,
            jobs: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CapKind {
    Iterations,
    SetSize,
    Norm,
}

impl std::fmt::Display for CapKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CapKind::Iterations => write!(f, "iteration limit"),
            CapKind::SetSize => write!(f, "set size limit"),
            CapKind::Norm => write!(f, "norm limit"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Dim(#[from] DimMismatch),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("resource cap exceeded at step {step}: {kind}")]
    ResourceCap { kind: CapKind, step: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("pseudo-witness replay failed: {0}")]
    ReplayFailed(String),
    #[error("thread pool: {0}")]
    Pool(String),
}

/// Which of the two equivalent fixpoint computations produced a chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum View {
    Classical,
    Dual,
}

/// One recorded step: the filter basis, its complement decomposition, the
/// ideals proper at this step, and the time spent producing the step.
#[derive(Debug, Clone)]
pub struct ChainStep {
    pub upset: UpSet,
    pub downset: DownSet,
    pub proper: Vec<OmegaVec>,
    pub elapsed: Duration,
}

/// A recorded descending chain `D_0 ⊋ D_1 ⊋ ... ⊋ D_l` together with the
/// ascending filter chain it complements.
#[derive(Debug, Clone)]
pub struct ChainRecord {
    pub view: View,
    pub dim: usize,
    pub steps: Vec<ChainStep>,
    /// True when the run reached `U_{l+1} = U_l`.
    pub stabilized: bool,
    /// Total fixpoint iterations including the stabilization-confirming one.
    pub iterations_run: usize,
}

impl ChainRecord {
    /// Number of strict steps (the recorded chain has `ell() + 1` snapshots).
    pub fn ell(&self) -> usize {
        self.steps.len().saturating_sub(1)
    }

    pub fn final_upset(&self) -> &UpSet {
        &self.steps.last().expect("chain has at least one step").upset
    }

    pub fn final_downset(&self) -> &DownSet {
        &self.steps.last().expect("chain has at least one step").downset
    }

    /// Assemble a record from raw decompositions, e.g. to feed the monitors
    /// a synthetic chain. Upsets are derived by complementation and proper
    /// ideals by decomposition difference; nothing is validated.
    pub fn from_downsets(view: View, downsets: Vec<DownSet>) -> Result<Self, DimMismatch> {
        assert!(!downsets.is_empty(), "a chain needs at least one step");
        let dim = downsets[0].dim();
        for d in &downsets {
            if d.dim() != dim {
                return Err(DimMismatch { left: dim, right: d.dim() });
            }
        }
        let steps = attach_proper(
            downsets
                .iter()
                .map(|d| (d.complement(), d.clone(), Duration::ZERO))
                .collect(),
        );
        Ok(ChainRecord { view, dim, steps, stabilized: false, iterations_run: downsets.len() })
    }
}

/// Outcome of a coverability query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    /// True iff a source was given and it covers the target.
    pub coverable: bool,
    /// Strict fixpoint steps until stabilization.
    pub iterations: usize,
    pub pseudo_witness: Option<Vec<NatVec>>,
    pub concrete_execution: Option<Vec<NatVec>>,
}

fn attach_proper(raw: Vec<(UpSet, DownSet, Duration)>) -> Vec<ChainStep> {
    let mut steps = Vec::with_capacity(raw.len());
    for (k, (upset, downset, elapsed)) in raw.iter().enumerate() {
        let proper = if k + 1 < raw.len() {
            downset
                .ideals()
                .iter()
                .filter(|i| !raw[k + 1].1.has_member_ideal(i))
                .cloned()
                .collect()
        } else {
            Vec::new()
        };
        steps.push(ChainStep {
            upset: upset.clone(),
            downset: downset.clone(),
            proper,
            elapsed: *elapsed,
        });
    }
    steps
}

/// Fixpoint driver for one model instance.
pub struct BackwardEngine {
    model: Model,
    config: EngineConfig,
    pool: Option<rayon::ThreadPool>,
}

impl BackwardEngine {
    pub fn new(model: Model) -> Self {
        BackwardEngine::with_config(model, EngineConfig::default())
            .expect("default config builds no pool")
    }

    pub fn with_config(model: Model, config: EngineConfig) -> Result<Self, EngineError> {
        let pool = if config.jobs > 1 {
            Some(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(config.jobs)
                    .build()
                    .map_err(|e| EngineError::Pool(e.to_string()))?,
            )
        } else {
            None
        };
        Ok(BackwardEngine { model, config, pool })
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    fn validate(&self, t: &NatVec, s: Option<&NatVec>) -> Result<(), EngineError> {
        let d = self.model.dim();
        if t.len() != d {
            return Err(DimMismatch { left: d, right: t.len() }.into());
        }
        if let Some(s) = s {
            if s.len() != d {
                return Err(DimMismatch { left: d, right: s.len() }.into());
            }
        }
        Ok(())
    }

    /// Union of the minimal `Pre` generators of the basis elements, computed
    /// per element (with memoization across steps) and merged in basis order
    /// so that parallel execution stays deterministic.
    fn pre_generators(
        &self,
        cache: &mut HashMap<NatVec, Vec<NatVec>>,
        basis: &[NatVec],
    ) -> Result<Vec<NatVec>, EngineError> {
        let misses: Vec<NatVec> =
            basis.iter().filter(|v| !cache.contains_key(*v)).cloned().collect();
        let computed: Result<Vec<(NatVec, Vec<NatVec>)>, ModelError> = match &self.pool {
            Some(pool) => pool.install(|| {
                misses
                    .par_iter()
                    .map(|v| self.model.pre_min(v).map(|pre| (v.clone(), pre)))
                    .collect()
            }),
            None => misses
                .iter()
                .map(|v| self.model.pre_min(v).map(|pre| (v.clone(), pre)))
                .collect(),
        };
        for (v, pre) in computed? {
            cache.insert(v, pre);
        }
        let mut out = Vec::new();
        for v in basis {
            out.extend(cache.get(v).expect("computed above").iter().cloned());
        }
        Ok(out)
    }

    fn check_caps(
        &self,
        step: usize,
        upset: &UpSet,
        downset: Option<&DownSet>,
    ) -> Result<(), EngineError> {
        if upset.basis().len() > self.config.max_set_size {
            return Err(EngineError::ResourceCap { kind: CapKind::SetSize, step });
        }
        if let Some(d) = downset {
            if d.ideals().len() > self.config.max_set_size {
                return Err(EngineError::ResourceCap { kind: CapKind::SetSize, step });
            }
        }
        if let Some(cap) = &self.config.max_norm {
            let norm_exceeded = upset.norm() > *cap
                || downset.map(|d| d.norm() > *cap).unwrap_or(false);
            if norm_exceeded {
                return Err(EngineError::ResourceCap { kind: CapKind::Norm, step });
            }
        }
        Ok(())
    }

    /// Classical backward coverability: ascending minimal bases from `↑t`.
    pub fn classical(
        &self,
        t: &NatVec,
        s: Option<&NatVec>,
    ) -> Result<(ChainRecord, Verdict), EngineError> {
        self.validate(t, s)?;
        let d = self.model.dim();
        let mut cache = HashMap::new();
        let mut raw: Vec<(UpSet, DownSet, Duration)> = Vec::new();
        let start = Instant::now();
        let u0 = UpSet::from_vectors(d, vec![t.clone()])?;
        self.check_caps(0, &u0, None)?;
        let d0 = u0.complement();
        self.check_caps(0, &u0, Some(&d0))?;
        raw.push((u0, d0, start.elapsed()));
        let iterations_run = loop {
            let k = raw.len() - 1;
            if k >= self.config.max_iterations {
                return Err(EngineError::ResourceCap { kind: CapKind::Iterations, step: k });
            }
            let tick = Instant::now();
            let basis = raw[k].0.basis().to_vec();
            let mut gens = self.pre_generators(&mut cache, &basis)?;
            gens.extend(basis);
            let next = UpSet::from_vectors(d, gens)?;
            if next == raw[k].0 {
                break k + 1;
            }
            self.check_caps(k + 1, &next, None)?;
            let next_down = next.complement();
            self.check_caps(k + 1, &next, Some(&next_down))?;
            raw.push((next, next_down, tick.elapsed()));
        };
        let record = ChainRecord {
            view: View::Classical,
            dim: d,
            steps: attach_proper(raw),
            stabilized: true,
            iterations_run,
        };
        let verdict = self.verdict_for(&record, s)?;
        Ok((record, verdict))
    }

    /// Dual backward coverability: descending canonical decompositions from
    /// `N^d \ ↑t`, with `Pre_forall` realized by double complementation.
    pub fn dual(
        &self,
        t: &NatVec,
        s: Option<&NatVec>,
    ) -> Result<(ChainRecord, Verdict), EngineError> {
        self.validate(t, s)?;
        let d = self.model.dim();
        let mut cache = HashMap::new();
        let mut raw: Vec<(UpSet, DownSet, Duration)> = Vec::new();
        let start = Instant::now();
        let d0 = UpSet::from_vectors(d, vec![t.clone()])?.complement();
        let u0 = d0.complement();
        self.check_caps(0, &u0, Some(&d0))?;
        raw.push((u0, d0, start.elapsed()));
        let iterations_run = loop {
            let k = raw.len() - 1;
            if k >= self.config.max_iterations {
                return Err(EngineError::ResourceCap { kind: CapKind::Iterations, step: k });
            }
            let tick = Instant::now();
            let basis = raw[k].0.basis().to_vec();
            let pre = self.pre_generators(&mut cache, &basis)?;
            let pre_upset = UpSet::from_vectors(d, pre)?;
            self.check_caps(k + 1, &pre_upset, None)?;
            let pre_forall = pre_upset.complement();
            let next_down = raw[k].1.intersect(&pre_forall)?;
            if next_down == raw[k].1 {
                break k + 1;
            }
            let next_up = next_down.complement();
            self.check_caps(k + 1, &next_up, Some(&next_down))?;
            raw.push((next_up, next_down, tick.elapsed()));
        };
        let record = ChainRecord {
            view: View::Dual,
            dim: d,
            steps: attach_proper(raw),
            stabilized: true,
            iterations_run,
        };
        let verdict = self.verdict_for(&record, s)?;
        Ok((record, verdict))
    }

    fn verdict_for(
        &self,
        record: &ChainRecord,
        s: Option<&NatVec>,
    ) -> Result<Verdict, EngineError> {
        let iterations = record.ell();
        match s {
            None => Ok(Verdict {
                coverable: false,
                iterations,
                pseudo_witness: None,
                concrete_execution: None,
            }),
            Some(s) => {
                if record.final_upset().contains(s)? {
                    let witness = self
                        .extract_pseudo_witness(record, s)
                        .expect("source is covered, a witness must exist");
                    let execution = self.replay_pseudo_witness(&witness, s)?;
                    Ok(Verdict {
                        coverable: true,
                        iterations,
                        pseudo_witness: Some(witness),
                        concrete_execution: Some(execution),
                    })
                } else {
                    Ok(Verdict {
                        coverable: false,
                        iterations,
                        pseudo_witness: None,
                        concrete_execution: None,
                    })
                }
            }
        }
    }

    /// Walk the recorded chain backwards to a pseudo-witness
    /// `t_0 = t, t_{k+1} ∈ min Pre(↑t_k), t_{l'} ⊑ s` with `l'` minimal.
    /// `None` when `s` is not covered. Ties pick the lexicographically least
    /// candidate.
    pub fn extract_pseudo_witness(
        &self,
        chain: &ChainRecord,
        s: &NatVec,
    ) -> Option<Vec<NatVec>> {
        if s.len() != chain.dim || !chain.stabilized {
            return None;
        }
        let steps = &chain.steps;
        let lprime =
            (0..steps.len()).find(|&k| steps[k].upset.contains(s).expect("dims checked"))?;
        let start = steps[lprime]
            .upset
            .basis()
            .iter()
            .find(|b| b.leq_raw(s))
            .expect("membership gives a basis element below s");
        let mut reversed = vec![start.clone()];
        for k in (1..=lprime).rev() {
            let tk = reversed.last().expect("non-empty").clone();
            let candidate = steps[k - 1]
                .upset
                .basis()
                .iter()
                .filter(|b| {
                    k < 2 || !steps[k - 2].upset.contains(b).expect("dims checked")
                })
                .find(|b| {
                    let pre = self.model.pre_min(b).expect("dims checked");
                    let min_pre =
                        UpSet::from_vectors(chain.dim, pre).expect("dims checked");
                    min_pre.basis().contains(&tk)
                });
            let prev = candidate.expect("backward walk succeeds on a stabilized chain");
            reversed.push(prev.clone());
        }
        reversed.reverse();
        Some(reversed)
    }

    /// Lift a pseudo-witness to a concrete execution from `s`: compatibility
    /// lets every backward link replay forward from the larger configuration.
    /// Returns the execution `s = s_{l'} -> ... -> s_0` with `s_k ⊒ t_k`.
    pub fn replay_pseudo_witness(
        &self,
        witness: &[NatVec],
        s: &NatVec,
    ) -> Result<Vec<NatVec>, EngineError> {
        let last = witness
            .last()
            .ok_or_else(|| EngineError::Precondition("empty pseudo-witness".into()))?;
        if !last.leq(s)? {
            return Err(EngineError::Precondition(format!(
                "pseudo-witness end {last} is not below the source {s}"
            )));
        }
        let mut execution = vec![s.clone()];
        for k in (0..witness.len() - 1).rev() {
            let from = &witness[k + 1];
            let target = &witness[k];
            let transition = (0..self.transition_count()).find(|&i| {
                self.apply_transition(i, from)
                    .map(|w| w.map(|w| target.leq_raw(&w)).unwrap_or(false))
                    .unwrap_or(false)
            });
            let Some(idx) = transition else {
                return Err(EngineError::ReplayFailed(format!(
                    "no transition steps {from} above {target}; the input does not satisfy \
                     the pseudo-witness equations"
                )));
            };
            let current = execution.last().expect("non-empty").clone();
            let next = self.apply_transition(idx, &current)?.ok_or_else(|| {
                EngineError::ReplayFailed(format!(
                    "compatibility lifting failed at {current}; this is a bug"
                ))
            })?;
            execution.push(next);
        }
        debug_assert!(witness[0].leq_raw(execution.last().expect("non-empty")));
        Ok(execution)
    }

    fn transition_count(&self) -> usize {
        match &self.model {
            Model::Vas(v) => v.actions().len(),
            Model::Affine(n) => n.transitions().len(),
        }
    }

    fn apply_transition(&self, idx: usize, u: &NatVec) -> Result<Option<NatVec>, EngineError> {
        let out = match &self.model {
            Model::Vas(v) => v.step(u, &v.actions()[idx])?,
            Model::Affine(n) => n.transitions()[idx].apply(u)?,
        };
        Ok(out)
    }
}

/// Ideals of `Dk`'s decomposition absent from `Dk1`'s. Requires `Dk1 ⊆ Dk`.
pub fn proper_ideals(dk: &DownSet, dk1: &DownSet) -> Result<Vec<OmegaVec>, EngineError> {
    if !dk1.subset_of(dk)? {
        return Err(EngineError::Precondition(
            "proper_ideals requires the second argument to be included in the first".into(),
        ));
    }
    Ok(dk
        .ideals()
        .iter()
        .filter(|i| !dk1.has_member_ideal(i))
        .cloned()
        .collect())
}

fn is_descending(chain: &ChainRecord) -> bool {
    chain.steps.windows(2).all(|w| {
        let prev = &w[0].downset;
        let next = &w[1].downset;
        next.subset_of(prev).expect("chain dims agree") && prev != next
    })
}

/// Omega- and strong monotonicity of the proper ideals along the chain.
///
/// Every ideal proper at step `k+1` must be matched by one proper at step `k`
/// with a larger omega set (omega-monotone) or at least its dimension
/// (strongly monotone). A record that is not a strictly descending chain
/// fails both checks.
pub fn check_monotonicity(chain: &ChainRecord) -> (bool, bool) {
    if !is_descending(chain) {
        return (false, false);
    }
    let mut omega = true;
    let mut strong = true;
    for k in 1..chain.steps.len() {
        let previous = &chain.steps[k - 1].proper;
        for ideal in &chain.steps[k].proper {
            let oset = ideal.omega_set();
            omega &= previous
                .iter()
                .any(|p| oset.iter().all(|i| p.omega_set().contains(i)));
            strong &= previous.iter().any(|p| ideal.dim() <= p.dim());
        }
    }
    (omega, strong)
}

/// Where the chain first violates `‖D_k‖ <= g^k(n0)`, if anywhere.
pub fn check_control(chain: &ChainRecord, control: &Control) -> (bool, Option<usize>) {
    for (k, step) in chain.steps.iter().enumerate() {
        let bound = control.iterate_usize(k).expect("step index fits in the iterate budget");
        if step.downset.norm() > bound {
            return (false, Some(k));
        }
    }
    (true, None)
}

/// Thinness-related monitor results, with first-violation locations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThinnessReport {
    /// Every ideal of every decomposition is thin.
    pub all_ideals_thin: bool,
    pub first_non_thin: Option<(usize, OmegaVec)>,
    /// Every minimal basis vector of every filter chain member is nearly thin.
    pub basis_nearly_thin: bool,
    pub first_non_nearly_thin: Option<(usize, NatVec)>,
    /// `l <= L_d + 1` and every proper ideal at step `k` has `k <= L_{fdim}`.
    pub length_bound_ok: bool,
}

/// Run the thinness monitors against a bound table built from the same
/// control as the run.
pub fn check_thinness(chain: &ChainRecord, table: &BoundTable) -> Result<ThinnessReport, BoundsError> {
    let mut report = ThinnessReport {
        all_ideals_thin: true,
        first_non_thin: None,
        basis_nearly_thin: true,
        first_non_nearly_thin: None,
        length_bound_ok: true,
    };
    for (k, step) in chain.steps.iter().enumerate() {
        for ideal in step.downset.ideals() {
            if !table.is_thin(ideal)? {
                report.all_ideals_thin = false;
                report.first_non_thin.get_or_insert((k, ideal.clone()));
            }
        }
        for v in step.upset.basis() {
            if !table.is_nearly_thin(v)? {
                report.basis_nearly_thin = false;
                report.first_non_nearly_thin.get_or_insert((k, v.clone()));
            }
        }
        for ideal in &step.proper {
            if Nat::from(k) > table.lengths()[ideal.fdim()] {
                report.length_bound_ok = false;
            }
        }
    }
    let ell = Nat::from(chain.ell());
    if ell > table.lengths()[table.d()].clone() + Nat::from(1u32) {
        report.length_bound_ok = false;
    }
    Ok(report)
}

/// Aggregate result of all monitors over one recorded chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonitorReport {
    pub controlled: bool,
    pub first_control_violation: Option<usize>,
    pub omega_monotone: bool,
    pub strongly_monotone: bool,
    pub all_ideals_thin: bool,
    pub basis_nearly_thin: bool,
    pub length_bound_ok: bool,
}

impl MonitorReport {
    pub fn all_ok(&self) -> bool {
        self.controlled
            && self.omega_monotone
            && self.strongly_monotone
            && self.all_ideals_thin
            && self.basis_nearly_thin
            && self.length_bound_ok
    }
}

impl std::fmt::Display for MonitorReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mark = |b: bool| if b { "ok" } else { "VIOLATED" };
        match self.first_control_violation {
            Some(k) => writeln!(f, "controlled:         {} (first at step {k})", mark(self.controlled))?,
            None => writeln!(f, "controlled:         {}", mark(self.controlled))?,
        }
        writeln!(f, "omega-monotone:     {}", mark(self.omega_monotone))?;
        writeln!(f, "strongly-monotone:  {}", mark(self.strongly_monotone))?;
        writeln!(f, "ideals thin:        {}", mark(self.all_ideals_thin))?;
        writeln!(f, "basis nearly thin:  {}", mark(self.basis_nearly_thin))?;
        write!(f, "length bound:       {}", mark(self.length_bound_ok))
    }
}

/// Run every monitor on a chain against a control and its bound table.
pub fn monitor(
    chain: &ChainRecord,
    control: &Control,
    table: &BoundTable,
) -> Result<MonitorReport, BoundsError> {
    let (controlled, first_control_violation) = check_control(chain, control);
    let (omega_monotone, strongly_monotone) = check_monotonicity(chain);
    let thin = check_thinness(chain, table)?;
    Ok(MonitorReport {
        controlled,
        first_control_violation,
        omega_monotone,
        strongly_monotone,
        all_ideals_thin: thin.all_ideals_thin,
        basis_nearly_thin: thin.basis_nearly_thin,
        length_bound_ok: thin.length_bound_ok,
    })
}

/// Per-step monitor flags, e.g. for traces and CSV summaries. Step `k`
/// reports whether its norms, proper ideals, and basis satisfy the local
/// conditions with respect to step `k - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepFlags {
    pub controlled: bool,
    pub omega_monotone: bool,
    pub strongly_monotone: bool,
    pub ideals_thin: bool,
    pub basis_nearly_thin: bool,
}

pub fn step_flags(
    chain: &ChainRecord,
    control: &Control,
    table: &BoundTable,
) -> Result<Vec<StepFlags>, BoundsError> {
    let mut out = Vec::with_capacity(chain.steps.len());
    for (k, step) in chain.steps.iter().enumerate() {
        let bound = control.iterate_usize(k).expect("step index fits in the iterate budget");
        let mut flags = StepFlags {
            controlled: step.downset.norm() <= bound,
            omega_monotone: true,
            strongly_monotone: true,
            ideals_thin: true,
            basis_nearly_thin: true,
        };
        for ideal in step.downset.ideals() {
            flags.ideals_thin &= table.is_thin(ideal)?;
        }
        for v in step.upset.basis() {
            flags.basis_nearly_thin &= table.is_nearly_thin(v)?;
        }
        if k > 0 {
            let previous = &chain.steps[k - 1].proper;
            for ideal in &step.proper {
                let oset = ideal.omega_set();
                flags.omega_monotone &= previous
                    .iter()
                    .any(|p| oset.iter().all(|i| p.omega_set().contains(i)));
                flags.strongly_monotone &= previous.iter().any(|p| ideal.dim() <= p.dim());
            }
        }
        out.push(flags);
    }
    Ok(out)
}

/// The default control of a model instance: `g(x) = x + ‖model‖` with
/// `n0 = ‖t‖`.
pub fn default_control(model: &Model, target: &NatVec) -> Control {
    Control::affine(model.norm(), target.norm())
}

/// One dual step computed by thin-ideal enumeration instead of double
/// complementation: keep every thin ideal `I` with `I ⊆ D_k` and
/// `Post(I) ⊆ D_k`, then canonicalize. A cross-check mode for tiny tables
/// only; the candidate space grows as `(N_d + 2)^d`.
pub fn dual_step_by_thin_enumeration(
    net: &crate::models::AffineNet,
    dk: &DownSet,
    table: &BoundTable,
) -> Result<DownSet, EngineError> {
    let d = dk.dim();
    if table.d() != d {
        return Err(DimMismatch { left: table.d(), right: d }.into());
    }
    let max = table.sizes()[d].clone();
    let mut kept: Vec<OmegaVec> = Vec::new();
    let mut candidate: Vec<crate::ideal::OmegaNat> = vec![crate::ideal::OmegaNat::Omega; d];
    enumerate_ideals(&max, &mut candidate, 0, &mut |ideal: &OmegaVec| {
        if !table.is_thin(ideal).expect("dims agree") {
            return Ok(());
        }
        let included = dk.ideals().iter().any(|j| ideal.leq(j).expect("dims agree"));
        if !included {
            return Ok(());
        }
        for t in net.transitions() {
            if let Some(image) = t.post_ideal(ideal)? {
                if !dk.ideals().iter().any(|j| image.leq(j).expect("dims agree")) {
                    return Ok(());
                }
            }
        }
        kept.push(ideal.clone());
        Ok(())
    })?;
    Ok(DownSet::from_ideals(d, kept)?)
}

fn enumerate_ideals(
    max: &Nat,
    candidate: &mut Vec<crate::ideal::OmegaNat>,
    position: usize,
    visit: &mut impl FnMut(&OmegaVec) -> Result<(), EngineError>,
) -> Result<(), EngineError> {
    use crate::ideal::OmegaNat;
    if position == candidate.len() {
        return visit(&OmegaVec::new(candidate.clone()));
    }
    candidate[position] = OmegaNat::Omega;
    enumerate_ideals(max, candidate, position + 1, visit)?;
    let mut value = Nat::from(0u32);
    while value <= *max {
        candidate[position] = OmegaNat::Fin(value.clone());
        enumerate_ideals(max, candidate, position + 1, visit)?;
        value += Nat::from(1u32);
    }
    candidate[position] = OmegaNat::Omega;
    Ok(())
}
