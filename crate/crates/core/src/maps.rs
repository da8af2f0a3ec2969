//! The map functions of the two problems and trajectory iteration.
//!
//! Ten maps are exposed. For each problem there are the Collatz form, the
//! compressed form folding one halving into the odd step, the accelerated
//! form removing every power of 2 at once, a grouped variant of the
//! accelerated form that divides by a bounded power of 2, and an auxiliary
//! map defined on all integers whose trajectories are in one-to-one triplet
//! correspondence with the grouped accelerated map.
//!
//! The accelerated and grouped variants are distinct functions: on input 21
//! the accelerated 3x+1 map yields 1 (64 = 2^6) while the grouped form
//! divides by at most 8 and yields 8.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::numtheory::ResidueClass;
use crate::{Error, Result};

/// Which of the two problems a map belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Problem {
    X3,
    X5,
}

impl Problem {
    /// The odd multiplier: 3 or 5.
    pub fn multiplier(self) -> u32 {
        match self {
            Problem::X3 => 3,
            Problem::X5 => 5,
        }
    }
}

/// Identifier of one of the ten map functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MapId {
    /// `3n+1` on odd, `n/2` on even.
    C3,
    /// `(3n+1)/2` on odd, `n/2` on even.
    T3,
    /// `(3n+1)/2^ord2(3n+1)` on odd integers.
    U3Full,
    /// The 3-case grouped form of the accelerated 3x+1 map (divides by at most 8).
    U3Grouped,
    /// The auxiliary map on all integers paired with `U3Grouped`.
    FrakU3,
    /// `5n+1` on odd, `n/2` on even.
    C5,
    /// `(5n+1)/2` on odd, `n/2` on even.
    T5,
    /// `(5n+1)/2^ord2(5n+1)` on odd integers.
    U5Full,
    /// The 5-case grouped form of the accelerated 5x+1 map (divides by at most 32).
    U5Grouped,
    /// The auxiliary map on all integers paired with `U5Grouped`.
    FrakU5,
}

/// One case of a piecewise map: `n -> (mult*n + add) / div` on the guard class.
#[derive(Debug, Clone, Copy)]
pub struct BranchDef {
    pub label: &'static str,
    pub mult: i64,
    pub add: i64,
    pub div: i64,
    pub guard_rep: i64,
    pub guard_mod: u64,
}

impl BranchDef {
    pub fn guard(&self) -> ResidueClass {
        ResidueClass::of(self.guard_rep, self.guard_mod)
    }
}

const C3_BRANCHES: &[BranchDef] = &[
    BranchDef { label: "3n+1", mult: 3, add: 1, div: 1, guard_rep: 1, guard_mod: 2 },
    BranchDef { label: "n/2", mult: 1, add: 0, div: 2, guard_rep: 0, guard_mod: 2 },
];

const T3_BRANCHES: &[BranchDef] = &[
    BranchDef { label: "(3n+1)/2", mult: 3, add: 1, div: 2, guard_rep: 1, guard_mod: 2 },
    BranchDef { label: "n/2", mult: 1, add: 0, div: 2, guard_rep: 0, guard_mod: 2 },
];

const U3_GROUPED_BRANCHES: &[BranchDef] = &[
    BranchDef { label: "(3n+1)/4", mult: 3, add: 1, div: 4, guard_rep: 1, guard_mod: 8 },
    BranchDef { label: "(3n+1)/2", mult: 3, add: 1, div: 2, guard_rep: 3, guard_mod: 4 },
    BranchDef { label: "(3n+1)/8", mult: 3, add: 1, div: 8, guard_rep: 5, guard_mod: 8 },
];

const FRAK_U3_BRANCHES: &[BranchDef] = &[
    BranchDef { label: "(3n+1)/4", mult: 3, add: 1, div: 4, guard_rep: 1, guard_mod: 4 },
    BranchDef { label: "3n/2", mult: 3, add: 0, div: 2, guard_rep: 0, guard_mod: 2 },
    BranchDef { label: "(n+1)/4", mult: 1, add: 1, div: 4, guard_rep: 3, guard_mod: 4 },
];

const C5_BRANCHES: &[BranchDef] = &[
    BranchDef { label: "5n+1", mult: 5, add: 1, div: 1, guard_rep: 1, guard_mod: 2 },
    BranchDef { label: "n/2", mult: 1, add: 0, div: 2, guard_rep: 0, guard_mod: 2 },
];

const T5_BRANCHES: &[BranchDef] = &[
    BranchDef { label: "(5n+1)/2", mult: 5, add: 1, div: 2, guard_rep: 1, guard_mod: 2 },
    BranchDef { label: "n/2", mult: 1, add: 0, div: 2, guard_rep: 0, guard_mod: 2 },
];

const U5_GROUPED_BRANCHES: &[BranchDef] = &[
    BranchDef { label: "(5n+1)/4", mult: 5, add: 1, div: 4, guard_rep: 7, guard_mod: 8 },
    BranchDef { label: "(5n+1)/2", mult: 5, add: 1, div: 2, guard_rep: 1, guard_mod: 4 },
    BranchDef { label: "(5n+1)/16", mult: 5, add: 1, div: 16, guard_rep: 3, guard_mod: 32 },
    BranchDef { label: "(5n+1)/8", mult: 5, add: 1, div: 8, guard_rep: 11, guard_mod: 16 },
    BranchDef { label: "(5n+1)/32", mult: 5, add: 1, div: 32, guard_rep: 19, guard_mod: 32 },
];

const FRAK_U5_BRANCHES: &[BranchDef] = &[
    BranchDef { label: "5n/4", mult: 5, add: 0, div: 4, guard_rep: 0, guard_mod: 4 },
    BranchDef { label: "(5n-1)/2", mult: 5, add: -1, div: 2, guard_rep: 1, guard_mod: 2 },
    BranchDef { label: "(5n+6)/16", mult: 5, add: 6, div: 16, guard_rep: 2, guard_mod: 16 },
    BranchDef { label: "(5n+2)/8", mult: 5, add: 2, div: 8, guard_rep: 6, guard_mod: 8 },
    BranchDef { label: "(n+6)/16", mult: 1, add: 6, div: 16, guard_rep: 10, guard_mod: 16 },
];

impl MapId {
    pub fn problem(self) -> Problem {
        match self {
            MapId::C3 | MapId::T3 | MapId::U3Full | MapId::U3Grouped | MapId::FrakU3 => Problem::X3,
            MapId::C5 | MapId::T5 | MapId::U5Full | MapId::U5Grouped | MapId::FrakU5 => Problem::X5,
        }
    }

    /// The piecewise cases, in the order the map definitions list them.
    /// `None` for the fully accelerated maps, whose division exponent is
    /// input-dependent.
    pub fn branches(self) -> Option<&'static [BranchDef]> {
        match self {
            MapId::C3 => Some(C3_BRANCHES),
            MapId::T3 => Some(T3_BRANCHES),
            MapId::U3Grouped => Some(U3_GROUPED_BRANCHES),
            MapId::FrakU3 => Some(FRAK_U3_BRANCHES),
            MapId::C5 => Some(C5_BRANCHES),
            MapId::T5 => Some(T5_BRANCHES),
            MapId::U5Grouped => Some(U5_GROUPED_BRANCHES),
            MapId::FrakU5 => Some(FRAK_U5_BRANCHES),
            MapId::U3Full | MapId::U5Full => None,
        }
    }

    /// Maps whose domain is restricted to odd integers.
    pub fn odd_domain(self) -> bool {
        matches!(
            self,
            MapId::U3Full | MapId::U3Grouped | MapId::U5Full | MapId::U5Grouped
        )
    }

    /// True for the four maps with an operation-word structure (middle
    /// operations closed by a unique end-of-branch operation).
    pub fn is_word_map(self) -> bool {
        matches!(
            self,
            MapId::FrakU3 | MapId::FrakU5 | MapId::U3Grouped | MapId::U5Grouped
        )
    }

    /// True for the auxiliary maps defined on all integers.
    pub fn is_auxiliary(self) -> bool {
        matches!(self, MapId::FrakU3 | MapId::FrakU5)
    }

    /// Index of the end-of-branch case for word maps (always the last case).
    pub fn terminal_branch(self) -> Option<u8> {
        if self.is_word_map() {
            Some((self.branches().unwrap().len() - 1) as u8)
        } else {
            None
        }
    }
}

/// One applied map step: which case fired and what it produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepRecord {
    pub input: BigInt,
    pub branch: u8,
    pub output: BigInt,
}

/// Largest `e` such that `2^e` divides `n`. Errors on zero.
pub fn ord2(n: &BigInt) -> Result<u64> {
    n.trailing_zeros().ok_or(Error::OrdOfZero)
}

/// Applies one step of `map` to `n`.
///
/// Exactly one case of the piecewise definition applies; the guards
/// partition the map's domain. Even input to an accelerated map is a
/// domain error.
pub fn step(map: MapId, n: &BigInt) -> Result<StepRecord> {
    if map.odd_domain() && n.is_even() {
        return Err(Error::EvenInputToAcceleratedMap {
            map,
            n: n.to_string(),
        });
    }
    match map.branches() {
        Some(branches) => {
            for (i, b) in branches.iter().enumerate() {
                if b.guard().contains(n) {
                    let num = BigInt::from(b.mult) * n + BigInt::from(b.add);
                    let (q, r) = num.div_rem(&BigInt::from(b.div));
                    debug_assert!(r.is_zero(), "guard must imply divisibility");
                    return Ok(StepRecord {
                        input: n.clone(),
                        branch: i as u8,
                        output: q,
                    });
                }
            }
            unreachable!("branch guards partition the domain")
        }
        None => {
            // fully accelerated: (m*n + 1) / 2^ord2(m*n + 1)
            let m = map.problem().multiplier();
            let num = BigInt::from(m) * n + BigInt::one();
            let e = ord2(&num)?;
            Ok(StepRecord {
                input: n.clone(),
                branch: 0,
                output: num >> e,
            })
        }
    }
}

/// When a trajectory should stop.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StopRule {
    /// Stop after exactly this many steps.
    MaxSteps(usize),
    /// Stop once the output drops below the given value.
    ValueBelow(BigInt),
    /// Stop once the given case fires (used for "end of branch").
    BranchFired(u8),
    /// Stop once a value repeats.
    CycleDetected,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrajectoryStatus {
    /// The stop rule fired; the final step is the stopping step.
    RuleFired,
    /// The step budget ran out before the rule fired.
    BudgetExhausted,
}

/// A recorded trajectory, up to and including the stopping step.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub steps: Vec<StepRecord>,
    pub status: TrajectoryStatus,
    /// For [`StopRule::CycleDetected`], the values of the detected cycle in
    /// trajectory order, starting at the first repeated value.
    pub cycle: Option<Vec<BigInt>>,
}

impl Trajectory {
    /// The visited values: the start followed by every step output.
    pub fn values(&self, start: &BigInt) -> Vec<BigInt> {
        let mut v = Vec::with_capacity(self.steps.len() + 1);
        v.push(start.clone());
        v.extend(self.steps.iter().map(|s| s.output.clone()));
        v
    }
}

/// Iterates `map` from `n` until `rule` fires or `budget` steps have been
/// taken. Budget exhaustion is a status, not an error.
pub fn trajectory(map: MapId, n: &BigInt, rule: &StopRule, budget: usize) -> Result<Trajectory> {
    let mut steps = Vec::new();
    let mut seen: HashSet<BigInt> = HashSet::new();
    if matches!(rule, StopRule::CycleDetected) {
        seen.insert(n.clone());
    }
    let mut current = n.clone();
    let limit = match rule {
        StopRule::MaxSteps(m) => *m,
        _ => budget,
    };
    while steps.len() < limit {
        let rec = step(map, &current)?;
        current = rec.output.clone();
        let fired = match rule {
            StopRule::MaxSteps(m) => steps.len() + 1 == *m,
            StopRule::ValueBelow(v) => rec.output < *v,
            StopRule::BranchFired(b) => rec.branch == *b,
            StopRule::CycleDetected => !seen.insert(rec.output.clone()),
        };
        steps.push(rec);
        if fired {
            let cycle = if matches!(rule, StopRule::CycleDetected) {
                let repeat = &steps.last().unwrap().output;
                let mut values = vec![repeat.clone()];
                let from = steps.iter().position(|s| &s.input == repeat);
                if let Some(i) = from {
                    values = steps[i..].iter().map(|s| s.input.clone()).collect();
                }
                Some(values)
            } else {
                None
            };
            return Ok(Trajectory {
                steps,
                status: TrajectoryStatus::RuleFired,
                cycle,
            });
        }
    }
    Ok(Trajectory {
        steps,
        status: TrajectoryStatus::BudgetExhausted,
        cycle: None,
    })
}

/// Role of an integer within its triplet when translating between the
/// auxiliary map and the grouped accelerated map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    /// Branch-end integers.
    EndOfBranch,
    /// Everything else.
    Other,
}

/// The element-wise triplet correspondence: every integer of an auxiliary
/// trajectory maps to the matching integer of an accelerated trajectory.
///
/// Non-end integers map by `2n - 1`. Branch ends map by `3n - 1` for the
/// 3x+1 problem and `5n - 2` for the 5x+1 problem.
pub fn correspond_u_from_fraku(problem: Problem, n: &BigInt, role: Role) -> BigInt {
    match (problem, role) {
        (_, Role::Other) => n * 2 - 1,
        (Problem::X3, Role::EndOfBranch) => n * 3 - 1,
        (Problem::X5, Role::EndOfBranch) => n * 5 - 2,
    }
}
