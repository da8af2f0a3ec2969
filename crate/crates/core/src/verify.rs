//! Empirical slice experiments and the audits binding the analytic
//! machinery to direct iteration.
//!
//! Slices count, over an initial segment of the integers, how many starting
//! values are still below their chain's branch end at every level — the
//! measured counterpart of the rising-fraction DP. Chains landing on a
//! cycle of middle operations (the fixed point 1, or the small 5x+1 cycles)
//! are tallied separately, as are chains that exhaust their step budget;
//! neither is silently dropped.

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::families::rising_fraction;
use crate::maps::{step, MapId, Problem};
use crate::{Error, Result};

/// Which integers a slice runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    AllIntegers,
    OddIntegers,
}

/// Exact tallies of one slice experiment.
#[derive(Debug, Clone)]
pub struct SliceReport {
    pub map: MapId,
    pub domain: Domain,
    /// Upper bound of the slice (inclusive).
    pub n_max: u64,
    /// Integers tested (all of `1..=n_max`, or the odd ones).
    pub denominator: u64,
    /// Survivors per level `1..=levels`: start below the branch end at
    /// every level so far.
    pub counts: Vec<u64>,
    /// Chains that hit a middle-operation cycle.
    pub cycle_hits: u64,
    /// Chains that exhausted the step budget.
    pub budget_hits: u64,
    /// Rising-fraction values for comparison, when attached.
    pub analytic: Vec<Option<BigRational>>,
}

impl SliceReport {
    /// Measured fraction at `level` (1-based).
    pub fn fraction(&self, level: u32) -> BigRational {
        BigRational::new(
            BigInt::from(self.counts[level as usize - 1]),
            BigInt::from(self.denominator),
        )
    }

    /// Fills the analytic comparison column from the density DP with the
    /// given length cap.
    pub fn with_analytic(mut self, lmax: u32) -> Result<Self> {
        let report = rising_fraction(self.map, lmax, self.counts.len() as u32)?;
        self.analytic = report.fractions.into_iter().map(Some).collect();
        Ok(self)
    }
}

/// How one slice chain is compared and iterated.
struct SliceSetup {
    walk_map: MapId,
    /// End transform: level ends compare as `origin < end_mult*y - end_sub`.
    end_mult: i64,
    end_sub: i64,
}

fn slice_setup(map: MapId, domain: Domain) -> Result<SliceSetup> {
    match (map, domain) {
        (MapId::FrakU3 | MapId::FrakU5, Domain::AllIntegers) => Ok(SliceSetup {
            walk_map: map,
            end_mult: 1,
            end_sub: 0,
        }),
        // odd-domain sequences: chains run on the auxiliary partner and
        // compare through the correspondence (starts 2n-1, ends mn-e)
        (MapId::U3Grouped, Domain::OddIntegers) => Ok(SliceSetup {
            walk_map: MapId::FrakU3,
            end_mult: 3,
            end_sub: 1,
        }),
        (MapId::U5Grouped, Domain::OddIntegers) => Ok(SliceSetup {
            walk_map: MapId::FrakU5,
            end_mult: 5,
            end_sub: 2,
        }),
        (other, _) => Err(Error::NotAWordMap { map: other }),
    }
}

/// Counts starting integers up to `n_max` whose chain stays above its
/// origin (`origin < y_j`) for every level `j <= levels`.
pub fn slice_fraction(
    map: MapId,
    levels: u32,
    n_max: u64,
    domain: Domain,
    step_budget: usize,
) -> Result<SliceReport> {
    if levels < 1 {
        return Err(Error::InvalidLevels);
    }
    let setup = slice_setup(map, domain)?;
    let starts: Vec<u64> = match domain {
        Domain::AllIntegers => (1..=n_max).collect(),
        Domain::OddIntegers => (1..=n_max).step_by(2).collect(),
    };
    let denominator = starts.len() as u64;

    let zero = || (vec![0u64; levels as usize], 0u64, 0u64);
    let (counts, cycle_hits, budget_hits) = starts
        .par_iter()
        .map(|&n0| {
            let mut counts = vec![0u64; levels as usize];
            let origin = BigInt::from(n0);
            // odd starts walk as their auxiliary counterpart (n+1)/2
            let mut current = match domain {
                Domain::AllIntegers => origin.clone(),
                Domain::OddIntegers => (&origin + 1u8) / 2u8,
            };
            let terminal = setup.walk_map.terminal_branch().unwrap();
            let mut seen = std::collections::HashSet::new();
            let mut remaining = step_budget;
            let mut cycles = 0u64;
            let mut budgets = 0u64;
            'levels: for slot in counts.iter_mut() {
                seen.clear();
                seen.insert(current.clone());
                loop {
                    if remaining == 0 {
                        budgets = 1;
                        break 'levels;
                    }
                    remaining -= 1;
                    let rec = step(setup.walk_map, &current).expect("total on its domain");
                    current = rec.output;
                    if rec.branch == terminal {
                        break;
                    }
                    if !seen.insert(current.clone()) {
                        cycles = 1;
                        break 'levels;
                    }
                }
                let end: BigInt = &current * setup.end_mult - setup.end_sub;
                if origin < end {
                    *slot = 1;
                } else {
                    break;
                }
            }
            (counts, cycles, budgets)
        })
        .reduce(zero, |mut a, b| {
            for (x, y) in a.0.iter_mut().zip(&b.0) {
                *x += y;
            }
            (a.0, a.1 + b.1, a.2 + b.2)
        });

    Ok(SliceReport {
        map,
        domain,
        n_max,
        denominator,
        counts,
        cycle_hits,
        budget_hits,
        analytic: vec![None; levels as usize],
    })
}

/// Result of the one-to-one correspondence audit.
#[derive(Debug, Clone)]
pub struct BijectionReport {
    pub problem: Problem,
    pub bound: u64,
    pub checked: u64,
    pub violations: u64,
    pub first_violation: Option<String>,
}

/// Verifies, for every auxiliary-map triplet start `1..=bound`, that the
/// element-wise translation lands on the grouped accelerated map's triplet
/// computed independently, and that starting integers map injectively.
pub fn audit_bijection(problem: Problem, bound: u64) -> Result<BijectionReport> {
    let (aux, grouped, m, e) = match problem {
        Problem::X3 => (MapId::FrakU3, MapId::U3Grouped, 3i64, 1i64),
        Problem::X5 => (MapId::FrakU5, MapId::U5Grouped, 5, 2),
    };
    let terminal = aux.terminal_branch().unwrap();
    let mut violations = 0u64;
    let mut first_violation = None;
    let mut seen_starts = std::collections::HashSet::new();
    for x0 in 1..=bound {
        let x = BigInt::from(x0);
        let rec = step(aux, &x)?;
        let y = rec.output;

        // translated triplet
        let xs: BigInt = &x * 2 - 1;
        let int_exp: BigInt = &x * m - e;
        let y_exp: BigInt = if rec.branch == terminal {
            &y * m - e
        } else {
            &y * 2 - 1
        };

        // the grouped map's triplet, computed on its own
        let int_direct: BigInt = (&xs * m + 1u8) / 2u8;
        let y_direct = step(grouped, &xs)?.output;

        let injective = seen_starts.insert(xs.clone());
        if int_exp != int_direct || y_exp != y_direct || !injective {
            violations += 1;
            if first_violation.is_none() {
                first_violation = Some(format!(
                    "x={x}: expected ({xs}, {int_exp}, {y_exp}), grouped map gives ({xs}, {int_direct}, {y_direct})"
                ));
            }
        }
    }
    Ok(BijectionReport {
        problem,
        bound,
        checked: bound,
        violations,
        first_violation,
    })
}

/// Result of replaying enumerated families against direct iteration.
#[derive(Debug, Clone)]
pub struct FamilyAuditReport {
    pub map: MapId,
    pub length: u32,
    pub families: usize,
    pub members_checked: usize,
    pub violations: u64,
    pub first_violation: Option<String>,
}

/// For every family of length `l`, walks the first `samples` members of the
/// starting class and checks they realize exactly the family's word, land
/// in the end class, and in the direction the comparator predicted.
pub fn audit_family_vs_simulation(map: MapId, l: u32, samples: u32) -> Result<FamilyAuditReport> {
    let table = crate::families::enumerate_families(map, l)?;
    let terminal = map.terminal_branch().unwrap();
    let mut violations = 0u64;
    let mut first_violation = None;
    let mut members_checked = 0usize;
    for fam in &table.families {
        for s in 0..samples {
            let x = fam.x_class.member(s as i64);
            members_checked += 1;
            let mut current = x.clone();
            let mut realized: Vec<u8> = Vec::new();
            loop {
                let rec = step(map, &current)?;
                current = rec.output;
                let fired = rec.branch == terminal;
                realized.push(rec.branch);
                if fired {
                    break;
                }
            }
            let word_ok = realized[..realized.len() - 1] == *fam.word.middle()
                && realized.len() as u32 == l - 1;
            let y_ok = fam.y_class.contains(&current);
            let dir_ok = match fam.direction {
                crate::affine::Direction::PG => x >= current,
                crate::affine::Direction::PP => x < current,
            };
            if !word_ok || !y_ok || !dir_ok {
                violations += 1;
                if first_violation.is_none() {
                    first_violation = Some(format!(
                        "family {} member {x}: word_ok={word_ok} y_ok={y_ok} dir_ok={dir_ok}",
                        fam.x_class
                    ));
                }
            }
        }
    }
    Ok(FamilyAuditReport {
        map,
        length: l,
        families: table.families.len(),
        members_checked,
        violations,
        first_violation,
    })
}

/// Odd-integer count up to `n` inclusive.
pub fn odd_count(n: u64) -> u64 {
    n.div_ceil(2)
}

/// Tolerance check with an exact rational bound `tol_num / tol_den`.
pub fn within(a: &BigRational, b: &BigRational, tol_num: i64, tol_den: i64) -> bool {
    let diff = if a > b { a - b } else { b - a };
    diff <= BigRational::new(BigInt::from(tol_num), BigInt::from(tol_den))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn slice_matches_analytic_at_moderate_scale() {
        let r = slice_fraction(MapId::FrakU3, 3, 10_000, Domain::AllIntegers, 100_000)
            .unwrap()
            .with_analytic(30)
            .unwrap();
        assert_eq!(r.denominator, 10_000);
        assert_eq!(r.budget_hits, 0);
        // only the fixed point 1 cycles
        assert_eq!(r.cycle_hits, 1);
        let expect = [
            rat(1236245, 10_000_000),
            rat(508968, 10_000_000),
            rat(240408, 10_000_000),
        ];
        for (lvl, e) in expect.iter().enumerate() {
            let f = r.fraction(lvl as u32 + 1);
            assert!(within(&f, e, 8, 1000), "level {} got {}", lvl + 1, f);
        }
        // strictly decreasing across levels
        assert!(r.counts[0] > r.counts[1] && r.counts[1] > r.counts[2]);
        assert!(r.analytic[0].is_some());
    }

    #[test]
    fn slice_odd_domain() {
        let r = slice_fraction(MapId::U3Grouped, 1, 10_001, Domain::OddIntegers, 100_000).unwrap();
        assert_eq!(r.denominator, 5001);
        let f = r.fraction(1);
        // near the odd-integer rising fraction
        assert!(within(&f, &rat(2024107, 10_000_000), 1, 100), "got {f}");
    }

    #[test]
    fn slice_levels_decrease_through_deep_chains() {
        let r = slice_fraction(MapId::FrakU3, 7, 10_000, Domain::AllIntegers, 100_000).unwrap();
        assert_eq!(r.budget_hits, 0);
        for pair in r.counts.windows(2) {
            assert!(pair[1] < pair[0], "counts {:?}", r.counts);
        }
        // deep levels thin out to a fraction of a percent
        assert!(r.fraction(7) < rat(6, 1000), "got {}", r.fraction(7));
        assert!(r.fraction(7) > BigRational::from_integer(BigInt::from(0)));
    }

    #[test]
    fn slice_5x_cycles_are_reported() {
        let r = slice_fraction(MapId::FrakU5, 1, 50, Domain::AllIntegers, 100_000).unwrap();
        // 1, 2, 9, 14, 22 sit on middle-operation cycles
        assert_eq!(r.cycle_hits, 5);
        assert_eq!(r.budget_hits, 0);
    }

    #[test]
    fn slice_budget_hits_are_reported() {
        // divergent 5x+1 chains exhaust a tiny budget instead of hanging
        let r = slice_fraction(MapId::FrakU5, 2, 100, Domain::AllIntegers, 10).unwrap();
        assert!(r.budget_hits > 0);
    }

    #[test]
    fn bijection_audits_are_clean() {
        for problem in [Problem::X3, Problem::X5] {
            let r = audit_bijection(problem, 10_000).unwrap();
            assert_eq!(r.violations, 0, "{:?}: {:?}", problem, r.first_violation);
        }
        assert_eq!(audit_bijection(Problem::X3, 1).unwrap().violations, 0);
    }

    #[test]
    fn family_audits_are_clean() {
        let r = audit_family_vs_simulation(MapId::FrakU3, 6, 5).unwrap();
        assert_eq!((r.families, r.violations), (16, 0), "{:?}", r.first_violation);

        let r = audit_family_vs_simulation(MapId::FrakU5, 4, 3).unwrap();
        assert_eq!((r.families, r.violations), (16, 0), "{:?}", r.first_violation);

        let r = audit_family_vs_simulation(MapId::FrakU3, 2, 1).unwrap();
        assert_eq!((r.families, r.violations), (1, 0));

        // odd-domain grouped maps audit cleanly too
        let r = audit_family_vs_simulation(MapId::U3Grouped, 5, 3).unwrap();
        assert_eq!((r.families, r.violations), (8, 0), "{:?}", r.first_violation);
    }
}
