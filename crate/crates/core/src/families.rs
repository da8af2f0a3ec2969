//! Enumeration of sequence families per length and the exact density
//! dynamic program behind the rising-fraction function.
//!
//! For a word map, every starting integer belongs to exactly one family per
//! sequence length, and the family densities follow a geometric
//! progression: per length `L` the families cover `(1/4)(3/4)^(L-2)` of the
//! integers for the 3x+1 maps and `(1/16)(15/16)^(L-2)` for the 5x+1 maps.
//!
//! The rising fraction — the density of starting integers still below their
//! chain's end value after every level — is computed exactly over states
//! keyed by the exponents of 2 and of the odd prime in the composite
//! relation. Word counts per state are multinomial and the per-state density
//! is `count / 2^e2`, so no enumeration of the exponentially many words is
//! needed.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::affine::{solve_word, OperationWord, SequenceFamily};
use crate::maps::{MapId, Problem};
use crate::numtheory::{pow_bigint, pow_rational};
use crate::render::to_sig_decimal;
use crate::{Error, Result};

/// All families of one length, sorted by increment then start.
#[derive(Debug, Clone)]
pub struct FamilyTable {
    pub map: MapId,
    pub length: u32,
    pub families: Vec<SequenceFamily>,
}

impl FamilyTable {
    /// Family counts grouped by increment (the starting-class modulus), in
    /// increasing modulus order.
    pub fn grouped_counts(&self) -> Vec<(BigInt, usize)> {
        let mut counts: BTreeMap<BigInt, usize> = BTreeMap::new();
        for fam in &self.families {
            *counts.entry(fam.x_class.modulus().clone()).or_default() += 1;
        }
        counts.into_iter().collect()
    }

    /// Sum of the family densities of this length (1/increment each; doubled
    /// for the odd-domain maps so the total matches the per-length term).
    pub fn density_sum(&self) -> BigRational {
        let factor = if self.map.odd_domain() { 2 } else { 1 };
        self.families
            .iter()
            .map(|f| {
                BigRational::new(BigInt::from(factor), f.x_class.modulus().clone())
            })
            .sum()
    }
}

/// Word-by-word enumeration of every family of length `l`.
///
/// The word count is `2^(L-2)` (3x+1) or `4^(L-2)` (5x+1); lengths whose
/// enumeration would exceed 2^20 words are rejected in favour of the
/// density DP.
pub fn enumerate_families(map: MapId, l: u32) -> Result<FamilyTable> {
    if l < 2 {
        return Err(Error::InvalidLengthRange { lo: l, hi: l });
    }
    let alphabet = crate::affine::middle_alphabet(map)?.len();
    let k = (l - 2) as usize;
    if (alphabet as f64).powi(k as i32) > (1u64 << 20) as f64 {
        let count = format!("{alphabet}^{k}");
        return Err(Error::EnumerationTooLarge { l, count });
    }

    let mut families = Vec::new();
    let mut middle = vec![0u8; k];
    loop {
        let word = OperationWord::new(map, middle.clone())?;
        families.push(solve_word(&word)?);
        // odometer over the middle alphabet
        let mut i = k;
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            middle[i] += 1;
            if (middle[i] as usize) < alphabet {
                break;
            }
            middle[i] = 0;
        }
        if middle.iter().all(|&d| d == 0) {
            break;
        }
    }
    families.sort_by(|x, y| {
        (x.x_class.modulus(), x.x_class.rep()).cmp(&(y.x_class.modulus(), y.x_class.rep()))
    });
    Ok(FamilyTable {
        map,
        length: l,
        families,
    })
}

/// Per-length density of starting integers, `D_L`.
///
/// `(1/4)(3/4)^(L-2)` for the 3x+1 maps, `(1/16)(15/16)^(L-2)` for 5x+1;
/// odd-domain maps have the same value relative to the odd integers.
pub fn distribution_dl(map: MapId, l: u32) -> Result<BigRational> {
    if l < 2 {
        return Err(Error::InvalidLengthRange { lo: l, hi: l });
    }
    let (a, r) = geometric_parameters(map.problem());
    Ok(a * pow_rational(&r, l - 2))
}

/// Cumulative density `S_L` of starting integers over lengths `2..=L`:
/// `1 - (3/4)^(L-1)` resp. `1 - (15/16)^(L-1)`.
pub fn cumulative_sl(map: MapId, l: u32) -> Result<BigRational> {
    if l < 2 {
        return Err(Error::InvalidLengthRange { lo: l, hi: l });
    }
    let (_, r) = geometric_parameters(map.problem());
    Ok(BigRational::one() - pow_rational(&r, l - 1))
}

fn geometric_parameters(problem: Problem) -> (BigRational, BigRational) {
    let rat = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    match problem {
        Problem::X3 => (rat(1, 4), rat(3, 4)),
        Problem::X5 => (rat(1, 16), rat(15, 16)),
    }
}

/// One state of the density DP: `count` word-chains whose composite
/// relation has divisor product `2^e2` and multiplier product `base^eo`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelState {
    pub e2: u32,
    pub eo: u32,
    pub count: BigInt,
}

/// Exact density results of the rising-fraction computation.
#[derive(Debug, Clone)]
pub struct DensityReport {
    pub map: MapId,
    /// Requested length cap.
    pub lmax: u32,
    /// Length cap actually computed; smaller than `lmax` only when the
    /// state-space budget clamped the run.
    pub achieved_lmax: u32,
    pub levels: u32,
    /// The rising fraction after each level `1..=levels`.
    pub fractions: Vec<BigRational>,
    /// Per-length terms `D_L` for `L = 2..=achieved_lmax`.
    pub dl: Vec<(u32, BigRational)>,
    /// Cumulative coverage `S_L` at `achieved_lmax`.
    pub sl: BigRational,
    /// Surviving states after the last level.
    pub survivors: Vec<LevelState>,
}

impl DensityReport {
    /// The rising fraction at the requested level.
    pub fn fraction(&self) -> &BigRational {
        self.fractions.last().expect("levels >= 1")
    }

    /// Decimal rendering of the per-level fractions.
    pub fn rendered(&self, sig: usize) -> Vec<String> {
        self.fractions.iter().map(|f| to_sig_decimal(f, sig)).collect()
    }
}

/// Parameters of the DP for one word map.
struct DpParams {
    /// Divisor exponents of the middle alphabet.
    middle_exps: Vec<u32>,
    /// Divisor exponent of the end-of-branch operation (auxiliary-map form).
    terminal_exp: u32,
    /// Odd prime of the multiplier products.
    base: u32,
    /// Extra exponent on both sides of the comparison for the odd-domain
    /// maps, from the `2n-1` / `mn-e` translation of the composite relation.
    shift: u32,
}

fn dp_params(map: MapId) -> Result<DpParams> {
    let (middle_exps, terminal_exp, base) = match map.problem() {
        Problem::X3 => (vec![2, 1], 2, 3),
        Problem::X5 => (vec![2, 1, 4, 3], 4, 5),
    };
    if !map.is_word_map() {
        return Err(Error::NotAWordMap { map });
    }
    let shift = if map.odd_domain() { 1 } else { 0 };
    Ok(DpParams {
        middle_exps,
        terminal_exp,
        base,
        shift,
    })
}

/// `ways[k][e]`: number of middle words of `k` operations whose divisor
/// exponents sum to `e`.
fn branch_ways(exps: &[u32], kmax: usize) -> Vec<Vec<BigInt>> {
    let max_exp = *exps.iter().max().unwrap() as usize;
    let mut ways: Vec<Vec<BigInt>> = Vec::with_capacity(kmax + 1);
    ways.push(vec![BigInt::one()]);
    for k in 1..=kmax {
        let mut row = vec![BigInt::zero(); k * max_exp + 1];
        for (e, w) in ways[k - 1].iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            for &x in exps {
                row[e + x as usize] += w;
            }
        }
        ways.push(row);
    }
    ways
}

/// The rising-fraction function: exact density of starting integers whose
/// composite relation still satisfies `b < a` (start below end) at every
/// level boundary, with each level's sequence length in `2..=lmax`.
///
/// For the odd-domain maps the density is relative to the odd integers.
/// Requests whose state space would outgrow the size budget are clamped to
/// an achievable length cap, reported in `achieved_lmax`.
pub fn rising_fraction(map: MapId, lmax: u32, levels: u32) -> Result<DensityReport> {
    if lmax < 2 {
        return Err(Error::InvalidLengthRange { lo: lmax, hi: lmax });
    }
    if levels < 1 {
        return Err(Error::InvalidLevels);
    }
    let params = dp_params(map)?;
    // a single level folds one state over ~kmax^2 signature pairs; deeper
    // levels fold ~(j*kmax)^2 surviving states over the same pairs, so the
    // total work grows like kmax^4 * levels^3
    let cap = if levels == 1 {
        512
    } else {
        let w = 1e9 / f64::from(levels).powi(3);
        (w.powf(0.25) as usize).clamp(8, 512)
    };
    let kmax = ((lmax - 2) as usize).min(cap);
    let achieved_lmax = kmax as u32 + 2;
    let ways = branch_ways(&params.middle_exps, kmax);

    // survival test 2^(e2 + shift) < base^(eo + shift), via cached powers
    let max_exp = *params.middle_exps.iter().max().unwrap();
    let max_eo = (kmax as u32) * levels + params.shift;
    let max_e2 = (max_exp * kmax as u32 + params.terminal_exp) * levels + params.shift;
    let base_pows: Vec<BigInt> = (0..=max_eo).map(|e| pow_bigint(params.base, e)).collect();
    let two_pows: Vec<BigInt> = (0..=max_e2).map(|e| pow_bigint(2, e)).collect();
    let survives = |e2: u32, eo: u32| -> bool {
        two_pows[(e2 + params.shift) as usize] < base_pows[(eo + params.shift) as usize]
    };

    let mut states: BTreeMap<(u32, u32), BigInt> = BTreeMap::new();
    states.insert((0, 0), BigInt::one());
    let mut fractions = Vec::with_capacity(levels as usize);
    for _ in 0..levels {
        let mut next: BTreeMap<(u32, u32), BigInt> = BTreeMap::new();
        for (&(e2, eo), count) in &states {
            for (k, row) in ways.iter().enumerate() {
                let neo = eo + k as u32;
                for (e, w) in row.iter().enumerate() {
                    if w.is_zero() {
                        continue;
                    }
                    let ne2 = e2 + e as u32 + params.terminal_exp;
                    if survives(ne2, neo) {
                        *next.entry((ne2, neo)).or_insert_with(BigInt::zero) += count * w;
                    }
                }
            }
        }
        states = next;
        let f: BigRational = states
            .iter()
            .map(|(&(e2, _), count)| {
                BigRational::new(count.clone(), pow_bigint(2, e2))
            })
            .sum();
        fractions.push(f);
    }

    let dl = (2..=achieved_lmax)
        .map(|l| Ok((l, distribution_dl(map, l)?)))
        .collect::<Result<Vec<_>>>()?;
    let sl = cumulative_sl(map, achieved_lmax)?;
    let survivors = states
        .into_iter()
        .map(|((e2, eo), count)| LevelState { e2, eo, count })
        .collect();
    Ok(DensityReport {
        map,
        lmax,
        achieved_lmax,
        levels,
        fractions,
        dl,
        sl,
        survivors,
    })
}

/// One row of the rising-distribution table: families of length `l` and a
/// given increment whose start is below their end.
#[derive(Debug, Clone)]
pub struct PpRow {
    pub l: u32,
    pub modulus: BigInt,
    pub count: BigInt,
    /// Density of rising starts of this length (all increments together).
    pub per_l: BigRational,
    /// Cumulative rising density over lengths `2..=l`.
    pub cumulative: BigRational,
}

/// Per-length distribution of rising starts (`x < y`), one row per
/// (length, increment) pair carrying that length's totals.
pub fn pp_distribution_table(
    map: MapId,
    lo: u32,
    hi: u32,
) -> Result<Vec<PpRow>> {
    if lo < 2 || lo > hi {
        return Err(Error::InvalidLengthRange { lo, hi });
    }
    let params = dp_params(map)?;
    let kmax = (hi - 2) as usize;
    let ways = branch_ways(&params.middle_exps, kmax);

    let mut rows = Vec::new();
    let mut cumulative = BigRational::zero();
    for l in 2..=hi {
        let k = (l - 2) as usize;
        let mut entries: Vec<(u32, BigInt)> = Vec::new();
        for (e, w) in ways[k].iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            let e2 = e as u32 + params.terminal_exp;
            let b = pow_bigint(2, e2 + params.shift);
            let a = pow_bigint(params.base, k as u32 + params.shift);
            if b < a {
                entries.push((e2, w.clone()));
            }
        }
        let per_l: BigRational = entries
            .iter()
            .map(|(e2, w)| BigRational::new(w.clone(), pow_bigint(2, *e2)))
            .sum();
        cumulative += &per_l;
        if l >= lo {
            for (e2, w) in entries {
                // the native increment includes the odd-domain doubling
                rows.push(PpRow {
                    l,
                    modulus: pow_bigint(2, e2 + params.shift),
                    count: w,
                    per_l: per_l.clone(),
                    cumulative: cumulative.clone(),
                });
            }
        }
    }
    Ok(rows)
}
