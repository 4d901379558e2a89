//! Random Markov-type moves on braids and a fuzz harness checking that group
//! fingerprints of braid closures survive them.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::braid::{
    alphabet, defining_relations, exchange_pair, random_braid_with, BraidLetter, BraidWord,
    DefiningRelation, ExchangeSide, Stabilization, Theory,
};
use crate::error::{Error, Result};
use crate::homcount::{
    default_battery, fingerprint, Fingerprint, FiniteGroupTable, HomCountOptions,
};
use crate::present::{group_of_virtual_link, group_of_welded_link, wada_group, Presentation};

/// One move relating braids with equivalent closures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Move {
    /// Replace one side of a defining relation by the other at `at`.
    Rewrite {
        relation: DefiningRelation,
        at: usize,
    },
    /// Insert `left · right⁻¹` of a defining relation at `at`.
    Insert {
        relation: DefiningRelation,
        at: usize,
    },
    /// `g · b · g⁻¹`.
    Conjugate { by: BraidLetter },
    /// Right stabilization onto one more strand.
    Stabilize { kind: Stabilization },
    /// Split the word at `cut` into `b1 · b2` and form the exchange pair. The
    /// step starts from one form and continues from the other.
    Exchange {
        side: ExchangeSide,
        cut: usize,
        from_virtual: bool,
    },
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Rewrite { relation, at } => write!(f, "rewrite at {at} with {relation}"),
            Move::Insert { relation, at } => write!(f, "insert at {at} from {relation}"),
            Move::Conjugate { by } => write!(f, "conjugate by {by}"),
            Move::Stabilize { kind } => write!(f, "stabilize {kind}"),
            Move::Exchange {
                side,
                cut,
                from_virtual,
            } => {
                let from = if *from_virtual {
                    "virtual"
                } else {
                    "classical"
                };
                write!(f, "exchange {side} cut {cut} from {from} form")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveStep {
    pub mv: Move,
    /// For exchange moves, the braid the move starts from. It is not equal
    /// to the previous step's result, so fingerprints restart there.
    pub source: Option<BraidWord>,
    pub result: BraidWord,
}

pub fn apply_move(b: &BraidWord, mv: &Move) -> Result<MoveStep> {
    let (source, result) = match mv {
        Move::Rewrite { relation, at } => (None, b.rewrite_with_relation(relation, *at)?),
        Move::Insert { relation, at } => {
            if *at > b.len() {
                return Err(Error::NoMatch {
                    relation: relation.to_string(),
                    index: *at,
                });
            }
            let inserted = relation
                .left
                .iter()
                .copied()
                .chain(relation.right.iter().rev().map(|l| l.inverse()));
            let letters: Vec<_> = b.letters()[..*at]
                .iter()
                .copied()
                .chain(inserted)
                .chain(b.letters()[*at..].iter().copied())
                .collect();
            (None, BraidWord::new(b.strands(), b.theory(), letters)?)
        }
        Move::Conjugate { by } => (None, b.conjugate(*by)?),
        Move::Stabilize { kind } => (None, b.stabilize(*kind)?),
        Move::Exchange {
            side,
            cut,
            from_virtual,
        } => {
            if *cut > b.len() {
                return Err(Error::PositionOutOfRange {
                    position: *cut,
                    strands: b.strands(),
                });
            }
            let b1 = BraidWord::new(b.strands(), b.theory(), b.letters()[..*cut].iter().copied())?;
            let b2 = BraidWord::new(b.strands(), b.theory(), b.letters()[*cut..].iter().copied())?;
            let (classical, virtual_form) = exchange_pair(&b1, &b2, *side)?;
            if *from_virtual {
                (Some(virtual_form), classical)
            } else {
                (Some(classical), virtual_form)
            }
        }
    };
    Ok(MoveStep {
        mv: mv.clone(),
        source,
        result,
    })
}

/// Draws one applicable move. Stabilization and exchange moves are only
/// drawn while `b` has fewer than `max_strands` strands.
pub fn random_move<R: Rng + ?Sized>(
    b: &BraidWord,
    rng: &mut R,
    max_strands: usize,
) -> Result<MoveStep> {
    let theory = b.theory();
    let n = b.strands();
    let grow = n < max_strands;
    let relations = defining_relations(theory, n);
    loop {
        let mv = match rng.gen_range(0..5) {
            0 => {
                let sites = b.relation_sites(&relations);
                let Some(&(rel, at)) = sites.choose(rng) else {
                    continue;
                };
                Move::Rewrite {
                    relation: rel.clone(),
                    at,
                }
            }
            1 => {
                let Some(rel) = relations.choose(rng) else {
                    continue;
                };
                Move::Insert {
                    relation: rel.clone(),
                    at: rng.gen_range(0..=b.len()),
                }
            }
            2 => {
                let letters = alphabet(n, theory);
                let Some(&by) = letters.choose(rng) else {
                    continue;
                };
                Move::Conjugate { by }
            }
            3 if grow => {
                let kinds: &[Stabilization] = match theory {
                    Theory::Classical => &[Stabilization::Positive, Stabilization::Negative],
                    _ => &[
                        Stabilization::Positive,
                        Stabilization::Negative,
                        Stabilization::Virtual,
                    ],
                };
                Move::Stabilize {
                    kind: *kinds.choose(rng).expect("nonempty"),
                }
            }
            4 if grow && theory == Theory::Virtual => Move::Exchange {
                side: if rng.gen() {
                    ExchangeSide::Right
                } else {
                    ExchangeSide::Left
                },
                cut: rng.gen_range(0..=b.len()),
                from_virtual: rng.gen(),
            },
            _ => continue,
        };
        return apply_move(b, &mv);
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveTrace {
    pub theory: Theory,
    pub initial: BraidWord,
    pub steps: Vec<MoveStep>,
}

impl MoveTrace {
    pub fn last(&self) -> &BraidWord {
        self.steps.last().map_or(&self.initial, |s| &s.result)
    }
}

impl fmt::Display for MoveTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "theory {}", self.theory)?;
        writeln!(f, "start [{}] {}", self.initial.strands(), self.initial)?;
        for (k, step) in self.steps.iter().enumerate() {
            write!(f, "{} {}", k + 1, step.mv)?;
            if let Some(src) = &step.source {
                write!(f, " from [{}] {}", src.strands(), src)?;
            }
            writeln!(f, " -> [{}] {}", step.result.strands(), step.result)?;
        }
        Ok(())
    }
}

/// Which group of the closure is fingerprinted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FuzzInvariant {
    /// `G_v` for virtual braids, `G_w` for welded braids.
    LinkGroup,
    /// The Wada group of type `k` (welded braids only).
    Wada { k: u8, h: i64 },
}

impl FuzzInvariant {
    pub fn presentation(self, b: &BraidWord) -> Result<Presentation> {
        match (self, b.theory()) {
            (FuzzInvariant::LinkGroup, Theory::Welded) => group_of_welded_link(b),
            (FuzzInvariant::LinkGroup, _) => group_of_virtual_link(b),
            (FuzzInvariant::Wada { k, h }, _) => wada_group(b, k, h),
        }
    }
}

impl fmt::Display for FuzzInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FuzzInvariant::LinkGroup => f.write_str("link-group"),
            FuzzInvariant::Wada { k, h } => write!(f, "wada{k}(h={h})"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct FuzzConfig {
    pub theory: Theory,
    pub trials: usize,
    /// Initial strand counts are drawn from `2..=strands`.
    pub strands: usize,
    /// Initial lengths are drawn from `0..=length`.
    pub length: usize,
    /// Moves applied per trial.
    pub depth: usize,
    /// Moves that add a strand are not drawn at or beyond this count.
    pub max_strands: usize,
    pub seed: u64,
    pub invariant: FuzzInvariant,
    pub battery: Vec<FiniteGroupTable>,
    pub cap: u64,
}

impl FuzzConfig {
    pub fn new(theory: Theory, trials: usize, seed: u64) -> Self {
        FuzzConfig {
            theory,
            trials,
            strands: 4,
            length: 10,
            depth: 6,
            max_strands: 6,
            seed,
            invariant: FuzzInvariant::LinkGroup,
            battery: default_battery(),
            cap: crate::homcount::DEFAULT_CAP,
        }
    }

    fn validate(&self) -> Result<()> {
        let unsupported = matches!(
            (self.theory, self.invariant),
            (Theory::Classical, _) | (Theory::Virtual, FuzzInvariant::Wada { .. })
        );
        if unsupported {
            return Err(Error::TheoryMismatch {
                expected: "virtual (link group) or welded".into(),
                found: format!("{} with {}", self.theory, self.invariant),
            });
        }
        if self.strands < 2 {
            return Err(Error::PositionOutOfRange {
                position: self.strands,
                strands: 2,
            });
        }
        Ok(())
    }
}

/// The seed of trial `index`, usable with [`run_trial`] to replay it.
pub fn trial_seed(seed: u64, index: usize) -> u64 {
    seed ^ (index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TrialStatus {
    Passed,
    Skipped(String),
    Mismatch {
        /// Step after which the fingerprint differs (0 = start of trace).
        segment_start: usize,
        expected: Fingerprint,
        found: Fingerprint,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialOutcome {
    pub index: usize,
    pub seed: u64,
    pub trace: Option<MoveTrace>,
    pub status: TrialStatus,
}

fn check_trial(cfg: &FuzzConfig, trace: &MoveTrace) -> Result<TrialStatus> {
    let opts = HomCountOptions {
        cap: cfg.cap,
        parallel: false,
    };
    let fp = |b: &BraidWord| fingerprint(&cfg.invariant.presentation(b)?, &cfg.battery, opts);
    // an exchange step restarts the chain: compare the segment so far first
    let mut anchor = fp(&trace.initial)?;
    let mut segment_start = 0;
    let mut current = &trace.initial;
    for (k, step) in trace.steps.iter().enumerate() {
        if let Some(src) = &step.source {
            let here = fp(current)?;
            if here != anchor {
                return Ok(TrialStatus::Mismatch {
                    segment_start,
                    expected: anchor,
                    found: here,
                });
            }
            anchor = fp(src)?;
            segment_start = k + 1;
        }
        current = &step.result;
    }
    let last = fp(current)?;
    Ok(if last == anchor {
        TrialStatus::Passed
    } else {
        TrialStatus::Mismatch {
            segment_start,
            expected: anchor,
            found: last,
        }
    })
}

/// Runs trial `index` of a campaign; the result depends only on `cfg` and `index`.
pub fn run_trial(cfg: &FuzzConfig, index: usize) -> TrialOutcome {
    let seed = trial_seed(cfg.seed, index);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=cfg.strands);
    let len = rng.gen_range(0..=cfg.length);
    let initial = random_braid_with(&mut rng, n, len, cfg.theory);
    let mut trace = MoveTrace {
        theory: cfg.theory,
        initial,
        steps: Vec::with_capacity(cfg.depth),
    };
    let built = (0..cfg.depth).try_for_each(|_| {
        let step = random_move(trace.last(), &mut rng, cfg.max_strands.max(n))?;
        trace.steps.push(step);
        Ok(())
    });
    let status = match built.and_then(|()| check_trial(cfg, &trace)) {
        Ok(status) => status,
        Err(e) => TrialStatus::Skipped(e.to_string()),
    };
    TrialOutcome {
        index,
        seed,
        trace: Some(trace),
        status,
    }
}

#[derive(Debug, Clone)]
pub struct FuzzReport {
    pub theory: Theory,
    pub invariant: FuzzInvariant,
    pub seed: u64,
    pub outcomes: Vec<TrialOutcome>,
}

impl FuzzReport {
    pub fn passed(&self) -> usize {
        self.outcomes
            .iter()
            .filter(|o| o.status == TrialStatus::Passed)
            .count()
    }

    pub fn skipped(&self) -> impl Iterator<Item = &TrialOutcome> {
        self.outcomes
            .iter()
            .filter(|o| matches!(o.status, TrialStatus::Skipped(_)))
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &TrialOutcome> {
        self.outcomes
            .iter()
            .filter(|o| matches!(o.status, TrialStatus::Mismatch { .. }))
    }
}

impl fmt::Display for FuzzReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "fuzz theory={} invariant={} seed={} trials={} passed={} skipped={} mismatches={}",
            self.theory,
            self.invariant,
            self.seed,
            self.outcomes.len(),
            self.passed(),
            self.skipped().count(),
            self.mismatches().count()
        )?;
        for o in self.skipped() {
            if let TrialStatus::Skipped(reason) = &o.status {
                writeln!(f, "skipped trial {} seed {}: {reason}", o.index, o.seed)?;
            }
        }
        for o in self.mismatches() {
            if let TrialStatus::Mismatch {
                segment_start,
                expected,
                found,
            } = &o.status
            {
                writeln!(
                    f,
                    "mismatch trial {} seed {} after step {segment_start}: expected {expected}, found {found}",
                    o.index, o.seed
                )?;
                if let Some(trace) = &o.trace {
                    write!(f, "{trace}")?;
                }
            }
        }
        Ok(())
    }
}

/// Runs all trials in parallel; outcomes are ordered by trial index.
pub fn fuzz(cfg: &FuzzConfig) -> Result<FuzzReport> {
    cfg.validate()?;
    let outcomes = (0..cfg.trials)
        .into_par_iter()
        .map(|i| run_trial(cfg, i))
        .collect();
    Ok(FuzzReport {
        theory: cfg.theory,
        invariant: cfg.invariant,
        seed: cfg.seed,
        outcomes,
    })
}
