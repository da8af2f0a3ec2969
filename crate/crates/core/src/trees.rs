//! Branches, branch chains, and the interlocking branch tree of the
//! auxiliary maps, with DOT export.
//!
//! A branch is a maximal run of middle operations closed by the
//! end-of-branch operation. Branch ends begin further branches, so the
//! whole structure interlocks into a tree rooted at 1; the tree is built
//! breadth-first by inverse stepping, which keeps it complete up to the
//! node budget.
//!
//! Chains of the 5x+1 auxiliary map can grow without bound, so every
//! iteration here takes an explicit step budget and reports exhaustion as a
//! status instead of looping.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::affine::Direction;
use crate::maps::{step, MapId, StepRecord};
use crate::{Error, Result};

/// A run of map steps ending, when complete, with the end-of-branch
/// operation.
#[derive(Debug, Clone)]
pub struct Branch {
    pub map: MapId,
    pub start: BigInt,
    pub steps: Vec<StepRecord>,
    /// The end-of-branch operation fired.
    pub complete: bool,
    /// A value repeated before the branch could end (the run sits on a
    /// cycle of middle operations).
    pub cycle: bool,
}

impl Branch {
    /// The last value reached.
    pub fn end(&self) -> &BigInt {
        self.steps.last().map(|s| &s.output).unwrap_or(&self.start)
    }

    /// Length counted in integers (`L`), start and end included.
    pub fn length(&self) -> u32 {
        self.steps.len() as u32 + 1
    }

    /// Every integer of the branch in order.
    pub fn values(&self) -> Vec<BigInt> {
        let mut v = Vec::with_capacity(self.steps.len() + 1);
        v.push(self.start.clone());
        v.extend(self.steps.iter().map(|s| s.output.clone()));
        v
    }

    /// Start-versus-end direction; `None` while incomplete.
    pub fn direction(&self) -> Option<Direction> {
        self.complete.then(|| {
            if self.start >= *self.end() {
                Direction::PG
            } else {
                Direction::PP
            }
        })
    }
}

fn require_auxiliary(map: MapId) -> Result<()> {
    if map.is_auxiliary() {
        Ok(())
    } else {
        Err(Error::NotAWordMap { map })
    }
}

/// Iterates middle operations from `n` until the end-of-branch operation
/// fires once, a value repeats, or the budget runs out.
pub fn branch_from(map: MapId, n: &BigInt, budget: usize) -> Result<Branch> {
    require_auxiliary(map)?;
    let terminal = map.terminal_branch().unwrap();
    let mut steps = Vec::new();
    let mut seen: HashSet<BigInt> = HashSet::new();
    seen.insert(n.clone());
    let mut current = n.clone();
    while steps.len() < budget {
        let rec = step(map, &current)?;
        current = rec.output.clone();
        let fired = rec.branch == terminal;
        let repeated = !seen.insert(rec.output.clone());
        steps.push(rec);
        if fired {
            return Ok(Branch {
                map,
                start: n.clone(),
                steps,
                complete: true,
                cycle: false,
            });
        }
        if repeated {
            return Ok(Branch {
                map,
                start: n.clone(),
                steps,
                complete: false,
                cycle: true,
            });
        }
    }
    Ok(Branch {
        map,
        start: n.clone(),
        steps,
        complete: false,
        cycle: false,
    })
}

/// One level of a chain, with the direction taken in both senses.
#[derive(Debug, Clone)]
pub struct ChainLevel {
    pub branch: Branch,
    /// Level start versus level end (`x_j` vs `y_j`).
    pub vs_level_start: Option<Direction>,
    /// Original start versus level end (`x_1` vs `y_j`) — the sense the
    /// densities measure.
    pub vs_origin: Option<Direction>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainStatus {
    Completed,
    BudgetExhausted,
    CycleDetected,
}

/// Successive branches, each starting where the previous one ended.
#[derive(Debug, Clone)]
pub struct Chain {
    pub origin: BigInt,
    pub levels: Vec<ChainLevel>,
    pub status: ChainStatus,
}

/// Follows `max_levels` branch ends from `n`, spending at most `budget`
/// steps overall.
pub fn chain_from(map: MapId, n: &BigInt, max_levels: u32, budget: usize) -> Result<Chain> {
    require_auxiliary(map)?;
    let mut levels = Vec::new();
    let mut status = ChainStatus::Completed;
    let mut remaining = budget;
    let mut start = n.clone();
    for _ in 0..max_levels {
        let branch = branch_from(map, &start, remaining)?;
        remaining -= branch.steps.len();
        let end = branch.end().clone();
        let vs_level_start = branch.direction();
        let vs_origin = branch.complete.then(|| {
            if *n >= end {
                Direction::PG
            } else {
                Direction::PP
            }
        });
        let complete = branch.complete;
        let cycle = branch.cycle;
        levels.push(ChainLevel {
            branch,
            vs_level_start,
            vs_origin,
        });
        if !complete {
            status = if cycle {
                ChainStatus::CycleDetected
            } else {
                ChainStatus::BudgetExhausted
            };
            break;
        }
        start = end;
    }
    Ok(Chain {
        origin: n.clone(),
        levels,
        status,
    })
}

/// All preimages of `m`: inputs `n` with `map(n) = m`, tagged with the case
/// that produces them.
pub fn preimages(map: MapId, m: &BigInt) -> Vec<(BigInt, u8)> {
    let branches = map.branches().expect("piecewise map");
    let mut out = Vec::new();
    for (i, b) in branches.iter().enumerate() {
        let cand = BigInt::from(b.div) * m - BigInt::from(b.add);
        let (n, rem) = cand.div_rem(&BigInt::from(b.mult));
        if rem.is_zero() && b.guard().contains(&n) {
            out.push((n, i as u8));
        }
    }
    out
}

/// The interlocking branch tree, discovered backward from the root.
#[derive(Debug, Clone)]
pub struct BranchTree {
    pub map: MapId,
    nodes: BTreeSet<BigInt>,
    /// Forward edge of each discovered node: `n -> (map(n), case)`.
    edges: BTreeMap<BigInt, (BigInt, u8)>,
    pub trunk: Vec<BigInt>,
}

impl BranchTree {
    pub fn contains(&self, n: &BigInt) -> bool {
        self.nodes.contains(n)
    }

    pub fn nodes(&self) -> &BTreeSet<BigInt> {
        &self.nodes
    }

    /// Forward edges in ascending source order.
    pub fn edges(&self) -> impl Iterator<Item = (&BigInt, &BigInt, u8)> {
        self.edges.iter().map(|(n, (m, b))| (n, m, *b))
    }
}

/// Breadth-first inverse expansion from the root 1, deduplicated, bounded
/// by `node_budget` nodes.
pub fn build_tree(map: MapId, node_budget: usize) -> Result<BranchTree> {
    require_auxiliary(map)?;
    let mut nodes = BTreeSet::new();
    let mut edges = BTreeMap::new();
    let mut queue = VecDeque::new();
    if node_budget > 0 {
        let root = BigInt::one();
        nodes.insert(root.clone());
        queue.push_back(root);
    }
    while let Some(m) = queue.pop_front() {
        for (n, branch) in preimages(map, &m) {
            if nodes.contains(&n) {
                continue;
            }
            if nodes.len() >= node_budget {
                break;
            }
            nodes.insert(n.clone());
            edges.insert(n.clone(), (m.clone(), branch));
            queue.push_back(n);
        }
    }
    let trunk: Vec<BigInt> = match map {
        // the sequence feeding the root through the end-of-branch operation
        MapId::FrakU3 => [2, 3, 1].iter().map(|&n| BigInt::from(n)).collect(),
        _ => [2, 1].iter().map(|&n| BigInt::from(n)).collect(),
    };
    Ok(BranchTree {
        map,
        nodes,
        edges,
        trunk,
    })
}

/// Direction of the full branch ending with the terminal edge out of `n`,
/// reconstructed by walking the unique middle-operation preimages back to
/// the branch beginner.
fn terminal_edge_direction(map: MapId, n: &BigInt, end: &BigInt) -> Direction {
    let terminal = map.terminal_branch().unwrap();
    let mut beginner = n.clone();
    let mut seen: HashSet<BigInt> = HashSet::new();
    loop {
        if !seen.insert(beginner.clone()) {
            break;
        }
        let up: Vec<BigInt> = preimages(map, &beginner)
            .into_iter()
            .filter(|(_, b)| *b != terminal)
            .map(|(p, _)| p)
            .collect();
        match up.as_slice() {
            [p] => beginner = p.clone(),
            _ => break,
        }
    }
    if beginner >= *end {
        Direction::PG
    } else {
        Direction::PP
    }
}

/// Deterministic DOT rendering: nodes ascending, one forward edge per node,
/// end-of-branch edges carrying the branch direction.
pub fn export_dot(tree: &BranchTree) -> String {
    let terminal = tree.map.terminal_branch().unwrap();
    let labels = tree.map.branches().unwrap();
    let mut out = String::new();
    let name = match tree.map {
        MapId::FrakU3 => "aux3_tree",
        _ => "aux5_tree",
    };
    out.push_str(&format!("digraph {name} {{\n"));
    for n in &tree.nodes {
        out.push_str(&format!("  \"{n}\";\n"));
    }
    for (n, m, branch) in tree.edges() {
        let label = labels[branch as usize].label;
        if branch == terminal {
            let dir = terminal_edge_direction(tree.map, n, m);
            out.push_str(&format!(
                "  \"{n}\" -> \"{m}\" [label=\"{label}\", dir_class=\"{dir}\"];\n"
            ));
        } else {
            out.push_str(&format!("  \"{n}\" -> \"{m}\" [label=\"{label}\"];\n"));
        }
    }
    out.push_str("}\n");
    out
}
