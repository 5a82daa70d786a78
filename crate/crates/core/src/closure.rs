//! Closing an automaton under a linear hypothesis `e ≤ w` by patching.
//!
//! A state `x` is closed when `⟦e⟧ · w⁻¹l(x) ⊆ l(x)`. A round checks every
//! state of a snapshot, then grafts a fresh copy of the `e`-automaton onto
//! each open state: `x -ε-> copy.initial` and `copy.final -ε-> x'` for every
//! `x'` that `x` reaches by reading `w` in the snapshot. Rounds repeat until
//! one performs no patch, or a budget runs out.
//!
//! Two variants differ only in what gets grafted: `T0` uses the plain
//! Thompson automaton of `e`, `TH` its `w`-saturation.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::automata::{inclusion, thompson, Label, Nfa, Origin, Prefixed, Rooted, StateId, DEFAULT_SUBSET_BUDGET};
use crate::error::{Error, Result};
use crate::syntax::{Hypothesis, Letter, Word};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    T0,
    #[default]
    TH,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::T0 => "t0",
            Variant::TH => "th",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Variant> {
        match s.to_ascii_lowercase().as_str() {
            "t0" => Ok(Variant::T0),
            "th" => Ok(Variant::TH),
            _ => Err(Error::InvalidConfig(format!(
                "unknown variant {s:?} (expected t0 or th)"
            ))),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ClosureConfig {
    pub variant: Variant,
    /// Rounds allowed, the confirming round included.
    pub max_rounds: u32,
    /// Largest automaton the construction may produce.
    pub max_states: usize,
    /// Subset states allowed per inclusion check.
    pub subset_budget: usize,
}

pub const DEFAULT_MAX_ROUNDS: u32 = 32;
pub const DEFAULT_MAX_STATES: usize = 10_000;

impl Default for ClosureConfig {
    fn default() -> Self {
        ClosureConfig {
            variant: Variant::TH,
            max_rounds: DEFAULT_MAX_ROUNDS,
            max_states: DEFAULT_MAX_STATES,
            subset_budget: DEFAULT_SUBSET_BUDGET,
        }
    }
}

impl ClosureConfig {
    pub fn with_variant(variant: Variant) -> Self {
        ClosureConfig {
            variant,
            ..ClosureConfig::default()
        }
    }

    pub fn max_rounds(mut self, n: u32) -> Self {
        self.max_rounds = n;
        self
    }

    pub fn max_states(mut self, n: usize) -> Self {
        self.max_states = n;
        self
    }

    pub fn validate(&self, input: &Nfa) -> Result<()> {
        if self.max_rounds == 0 {
            return Err(Error::InvalidConfig("max_rounds must be at least 1".into()));
        }
        if self.max_states < input.state_count() {
            return Err(Error::InvalidConfig(format!(
                "max_states {} is below the input size {}",
                self.max_states,
                input.state_count()
            )));
        }
        if self.subset_budget == 0 {
            return Err(Error::InvalidConfig("subset_budget must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BudgetReason {
    RoundBudget,
    StateBudget,
}

impl fmt::Display for BudgetReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BudgetReason::RoundBudget => "round budget",
            BudgetReason::StateBudget => "state budget",
        })
    }
}

/// One graft performed during a round.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct PatchRecord {
    pub round: u32,
    pub site: StateId,
    pub copy_states: Vec<StateId>,
    /// States the site reaches by reading `w` in the round snapshot.
    pub return_targets: Vec<StateId>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ClosureOutcome {
    Closed {
        result: Nfa,
        rounds_used: u32,
        patch_log: Vec<PatchRecord>,
        /// Automaton size after each round.
        state_counts: Vec<usize>,
    },
    BudgetExhausted {
        partial: Nfa,
        rounds_used: u32,
        reason: BudgetReason,
        patch_log: Vec<PatchRecord>,
        state_counts: Vec<usize>,
    },
}

impl ClosureOutcome {
    pub fn is_closed(&self) -> bool {
        matches!(self, ClosureOutcome::Closed { .. })
    }

    /// The closed automaton, or the partial one.
    pub fn automaton(&self) -> &Nfa {
        match self {
            ClosureOutcome::Closed { result, .. } => result,
            ClosureOutcome::BudgetExhausted { partial, .. } => partial,
        }
    }

    pub fn rounds_used(&self) -> u32 {
        match self {
            ClosureOutcome::Closed { rounds_used, .. } | ClosureOutcome::BudgetExhausted { rounds_used, .. } => {
                *rounds_used
            }
        }
    }

    pub fn patch_log(&self) -> &[PatchRecord] {
        match self {
            ClosureOutcome::Closed { patch_log, .. } | ClosureOutcome::BudgetExhausted { patch_log, .. } => patch_log,
        }
    }

    pub fn state_counts(&self) -> &[usize] {
        match self {
            ClosureOutcome::Closed { state_counts, .. } | ClosureOutcome::BudgetExhausted { state_counts, .. } => {
                state_counts
            }
        }
    }
}

fn letters_of(a: &Nfa, b: &Nfa) -> Vec<Letter> {
    let mut l = a.letters();
    l.extend(&b.letters());
    l.iter().collect()
}

/// True iff `x` is open: some `u ∈ ⟦e⟧` and `v ∈ w⁻¹l(x)` have `uv ∉ l(x)`.
/// `e_auto` must accept `⟦e⟧`.
fn open_at(m: &Nfa, x: StateId, w: &Word, e_auto: &Nfa, budget: usize) -> Result<bool> {
    let targets = m.w_reachable(x, w)?;
    if targets.is_empty() {
        return Ok(false);
    }
    let left = Prefixed::new(e_auto, m, targets).against_tail();
    let right = Rooted::new(m, [x]);
    Ok(inclusion(&left, &right, &letters_of(e_auto, m), budget)?.is_some())
}

/// Whether state `x` of `m` needs a patch for `h`.
pub fn needs_patch(m: &Nfa, x: StateId, h: &Hypothesis) -> Result<bool> {
    open_at(m, x, &h.rhs, &thompson(&h.lhs), DEFAULT_SUBSET_BUDGET)
}

/// Copies `z` into `m` and wires it in at `x`. Returns the copy's states.
fn graft(m: &mut Nfa, x: StateId, z: &Nfa, return_targets: &[StateId], round: u32) -> Vec<StateId> {
    let copy: Vec<StateId> = z
        .states()
        .map(|s| {
            m.add_state(Origin::PatchCopy {
                round,
                site: x,
                copy_index: s.0,
            })
        })
        .collect();
    for t in z.transitions() {
        m.add_transition(copy[t.from.index()], t.label, copy[t.to.index()]);
    }
    m.add_transition(x, Label::Eps, copy[z.initial().index()]);
    for &y in return_targets {
        m.add_transition(copy[z.final_state().index()], Label::Eps, y);
    }
    copy
}

/// `m` with a fresh copy of `z` patched in at `x`. Copy states are tagged
/// as round 0.
pub fn patch(m: &Nfa, x: StateId, z: &Nfa, return_targets: &[StateId]) -> Result<Nfa> {
    for &s in std::iter::once(&x).chain(return_targets) {
        if !m.contains_state(s) {
            return Err(Error::UnknownState(s));
        }
    }
    let mut out = m.clone();
    graft(&mut out, x, z, return_targets, 0);
    Ok(out)
}

/// The `w`-saturation of `z`: adds `s -ε-> z.initial` whenever `s` reaches
/// the final state by `w`, and `z.final -ε-> s` whenever the initial state
/// reaches `s` by `w`, until nothing changes. Only transitions are added.
pub fn saturate(z: &Nfa, w: &Word) -> Nfa {
    let mut m = z.clone();
    let (init, fin) = (m.initial(), m.final_state());
    loop {
        let mut added = Vec::new();
        for s in m.states() {
            let reach = m.w_reachable(s, w).expect("state of m");
            if reach.contains(&fin) {
                added.push((s, init));
            }
        }
        for s in m.w_reachable(init, w).expect("state of m") {
            added.push((fin, s));
        }
        let mut changed = false;
        for (from, to) in added {
            changed |= m.add_transition(from, Label::Eps, to);
        }
        if !changed {
            return m;
        }
    }
}

/// Order in which a round visits patch sites. The result is the same up to
/// renaming of copy states either way.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum SiteOrder {
    #[default]
    Ascending,
    Descending,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct RoundOptions {
    pub variant: Variant,
    /// Round number recorded in origins and patch records.
    pub round: u32,
    pub order: SiteOrder,
    pub subset_budget: usize,
    pub max_states: usize,
}

impl Default for RoundOptions {
    fn default() -> Self {
        RoundOptions {
            variant: Variant::TH,
            round: 1,
            order: SiteOrder::Ascending,
            subset_budget: DEFAULT_SUBSET_BUDGET,
            max_states: usize::MAX,
        }
    }
}

/// The automaton grafted by `variant` for `h`.
pub fn patch_automaton(h: &Hypothesis, variant: Variant) -> Nfa {
    let z = thompson(&h.lhs);
    match variant {
        Variant::T0 => z,
        Variant::TH => saturate(&z, &h.rhs),
    }
}

/// One round on `m`, numbered 1.
pub fn run_round(m: &Nfa, h: &Hypothesis, variant: Variant) -> Result<(Nfa, Vec<PatchRecord>)> {
    run_round_with(
        m,
        h,
        &RoundOptions {
            variant,
            ..RoundOptions::default()
        },
    )
}

/// One round: every state of `m` is checked against `m` itself, and every
/// open state gets its own copy. Fails with `StateBudgetExceeded` if a
/// subset search or the patched automaton outgrows its budget.
pub fn run_round_with(m: &Nfa, h: &Hypothesis, opts: &RoundOptions) -> Result<(Nfa, Vec<PatchRecord>)> {
    let e_auto = thompson(&h.lhs);
    let z = match opts.variant {
        Variant::T0 => e_auto.clone(),
        Variant::TH => saturate(&e_auto, &h.rhs),
    };
    let open: Vec<bool> = m
        .states()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&x| open_at(m, x, &h.rhs, &e_auto, opts.subset_budget))
        .collect::<Result<_>>()?;
    let mut sites: Vec<StateId> = m.states().filter(|x| open[x.index()]).collect();
    if opts.order == SiteOrder::Descending {
        sites.reverse();
    }

    let mut out = m.clone();
    let mut log = Vec::with_capacity(sites.len());
    for x in sites {
        if out.state_count() + z.state_count() > opts.max_states {
            return Err(Error::StateBudgetExceeded { limit: opts.max_states });
        }
        let targets: Vec<StateId> = m.w_reachable(x, &h.rhs)?.into_iter().collect();
        let copy = graft(&mut out, x, &z, &targets, opts.round);
        log.push(PatchRecord {
            round: opts.round,
            site: x,
            copy_states: copy,
            return_targets: targets,
        });
    }
    Ok((out, log))
}

/// What an observer of [`closure_fixpoint_observed`] sees after each round.
#[derive(Debug)]
pub struct RoundReport<'a> {
    pub round: u32,
    pub automaton: &'a Nfa,
    pub patches: &'a [PatchRecord],
}

pub fn closure_fixpoint(m: &Nfa, h: &Hypothesis, cfg: &ClosureConfig) -> Result<ClosureOutcome> {
    closure_fixpoint_observed(m, h, cfg, SiteOrder::Ascending, |_| {})
}

/// Iterates rounds until one performs no patch. Running out of rounds or
/// states is reported in the outcome; only an invalid configuration is an
/// error.
pub fn closure_fixpoint_observed(
    m: &Nfa,
    h: &Hypothesis,
    cfg: &ClosureConfig,
    order: SiteOrder,
    mut observe: impl FnMut(&RoundReport<'_>),
) -> Result<ClosureOutcome> {
    cfg.validate(m)?;
    let mut current = m.clone();
    let mut patch_log = Vec::new();
    let mut state_counts = Vec::new();
    for round in 1..=cfg.max_rounds {
        let opts = RoundOptions {
            variant: cfg.variant,
            round,
            order,
            subset_budget: cfg.subset_budget,
            max_states: cfg.max_states,
        };
        let (next, log) = match run_round_with(&current, h, &opts) {
            Ok(r) => r,
            Err(Error::StateBudgetExceeded { .. }) => {
                return Ok(ClosureOutcome::BudgetExhausted {
                    partial: current,
                    rounds_used: round,
                    reason: BudgetReason::StateBudget,
                    patch_log,
                    state_counts,
                })
            }
            Err(e) => return Err(e),
        };
        state_counts.push(next.state_count());
        observe(&RoundReport {
            round,
            automaton: &next,
            patches: &log,
        });
        let done = log.is_empty();
        patch_log.extend(log);
        current = next;
        if done {
            return Ok(ClosureOutcome::Closed {
                result: current,
                rounds_used: round,
                patch_log,
                state_counts,
            });
        }
    }
    Ok(ClosureOutcome::BudgetExhausted {
        partial: current,
        rounds_used: cfg.max_rounds,
        reason: BudgetReason::RoundBudget,
        patch_log,
        state_counts,
    })
}

/// A name for every state that does not depend on the order in which
/// copies were allocated: original states keep their id, a copy is named
/// by its round, the name of its site and its index in the grafted
/// automaton.
pub fn canonical_names(m: &Nfa) -> Vec<String> {
    let mut names: Vec<String> = Vec::with_capacity(m.state_count());
    for s in m.states() {
        let name = match m.origin(s) {
            Origin::Original => s.to_string(),
            Origin::PatchCopy {
                round,
                site,
                copy_index,
            } => format!("r{round}[{}].{copy_index}", names[site.index()]),
        };
        names.push(name);
    }
    names
}

/// The set of ε-transitions `saturate` would add.
pub fn saturation_resets(z: &Nfa, w: &Word) -> BTreeSet<(StateId, StateId)> {
    let before = z.transition_set();
    saturate(z, w)
        .transitions()
        .filter(|t| !before.contains(t))
        .map(|t| (t.from, t.to))
        .collect()
}
