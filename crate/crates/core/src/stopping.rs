//! Stopping times and the distribution functions F(k) and G(k), built from
//! a recursive survivor triangle instead of per-integer iteration.
//!
//! The stopping time of `n` is the least `k` with `T^k(n) < n` under the
//! compressed map. Over any `2^k` consecutive integers every parity word of
//! length `k` occurs exactly once, and a class survives (`χ > k`) precisely
//! when its coefficient `3^i` (or `5^i`), with `i` odd steps taken, still
//! exceeds `2^k` at every iteration count. Counting surviving classes by
//! `i` gives the triangle `n(i, k)`; its column sums over `2^k` are `F(k)`.
//!
//! Two flavors are kept: `strict` drops a class the moment its coefficient
//! falls behind (`χ > k`), while `terras` counts classes before the drop,
//! which shifts the strict column by one iteration (`χ >= k`).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::maps::{step, MapId};
use crate::numtheory::pow_bigint;
use crate::{Error, Result};

/// Strict: classes with stopping time greater than `k`. Terras: at least `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flavor {
    Strict,
    Terras,
}

fn require_compressed(map: MapId) -> Result<u32> {
    match map {
        MapId::T3 => Ok(3),
        MapId::T5 => Ok(5),
        other => Err(Error::NotACompressedMap { map: other }),
    }
}

/// The table `n(i, k)` of surviving residue classes mod `2^k` with `i` odd
/// steps, for `0 <= i <= k <= k_max`.
#[derive(Debug, Clone)]
pub struct SurvivorTriangle {
    pub map: MapId,
    pub flavor: Flavor,
    cols: Vec<Vec<BigInt>>,
}

impl SurvivorTriangle {
    pub fn k_max(&self) -> u32 {
        self.cols.len() as u32 - 1
    }

    /// `n(i, k)`; zero outside the triangle.
    pub fn entry(&self, i: u32, k: u32) -> BigInt {
        self.cols
            .get(k as usize)
            .and_then(|col| col.get(i as usize))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    /// The column for `k` iterations, indexed by `i`.
    pub fn column(&self, k: u32) -> &[BigInt] {
        &self.cols[k as usize]
    }

    /// `F(k) = sum_i n(i, k) / 2^k`.
    pub fn distribution_f(&self, k: u32) -> BigRational {
        let total: BigInt = self.cols[k as usize].iter().sum();
        BigRational::new(total, pow_bigint(2, k))
    }
}

/// Builds the survivor triangle up to `k_max` columns.
///
/// Each surviving class at `k-1` spawns an even child (coefficient
/// unchanged, modulus doubled) and an odd child (coefficient multiplied by
/// the odd prime); a strict child survives iff its coefficient exceeds
/// `2^k`.
pub fn build_triangle(map: MapId, k_max: u32, flavor: Flavor) -> Result<SurvivorTriangle> {
    let base = require_compressed(map)?;
    let strict = strict_columns(base, k_max);
    let cols = match flavor {
        Flavor::Strict => strict,
        Flavor::Terras => {
            // children of the strict survivors, counted before the drop
            let mut cols = Vec::with_capacity(k_max as usize + 1);
            cols.push(vec![BigInt::one()]);
            for k in 1..=k_max as usize {
                let prev = &strict[k - 1];
                let mut col = vec![BigInt::zero(); k + 1];
                for (i, n) in prev.iter().enumerate() {
                    col[i] += n;
                    col[i + 1] += n;
                }
                cols.push(col);
            }
            cols
        }
    };
    Ok(SurvivorTriangle { map, flavor, cols })
}

fn strict_columns(base: u32, k_max: u32) -> Vec<Vec<BigInt>> {
    let mut cols: Vec<Vec<BigInt>> = Vec::with_capacity(k_max as usize + 1);
    cols.push(vec![BigInt::one()]);
    for k in 1..=k_max {
        let prev = &cols[k as usize - 1];
        let two_k = pow_bigint(2, k);
        let mut col = vec![BigInt::zero(); k as usize + 1];
        for i in 0..=k as usize {
            let mut n = if i < prev.len() { prev[i].clone() } else { BigInt::zero() };
            if i > 0 {
                n += &prev[i - 1];
            }
            if !n.is_zero() && pow_bigint(base, i as u32) > two_k {
                col[i] = n;
            }
        }
        cols.push(col);
    }
    cols
}

/// `F(k)` for the requested flavor, building the triangle on the fly.
pub fn distribution_f(map: MapId, k: u32, flavor: Flavor) -> Result<BigRational> {
    Ok(build_triangle(map, k, flavor)?.distribution_f(k))
}

/// `G(k) = 1 - F_strict(k)`: the density of integers whose stopping time is
/// at most `k`. Tends to 1 as `k` grows.
pub fn distribution_g(map: MapId, k: u32) -> Result<BigRational> {
    Ok(BigRational::one() - distribution_f(map, k, Flavor::Strict)?)
}

/// Result of a stopping-time search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StoppingTime {
    /// Least `k` with `T^k(n) < n`.
    Stopped(u64),
    /// Not reached within the step budget.
    Exceeded,
}

/// Direct iteration: the least `k <= budget` with `T^k(n) < n`.
pub fn stopping_time(map: MapId, n: &BigInt, budget: u64) -> Result<StoppingTime> {
    require_compressed(map)?;
    let mut current = n.clone();
    for k in 1..=budget {
        current = step(map, &current)?.output;
        if current < *n {
            return Ok(StoppingTime::Stopped(k));
        }
    }
    Ok(StoppingTime::Exceeded)
}

/// The parity word of `n`: which of the first `k` compressed-map steps hit
/// an odd integer. Constant on residue classes mod `2^k`.
pub fn parity_word(map: MapId, n: &BigInt, k: u32) -> Result<Vec<bool>> {
    require_compressed(map)?;
    let mut word = Vec::with_capacity(k as usize);
    let mut current = n.clone();
    for _ in 0..k {
        let rec = step(map, &current)?;
        word.push(rec.branch == 0);
        current = rec.output;
    }
    Ok(word)
}

/// Brute-force estimate of `F(k)` over `n <= n_max`, with the class-level
/// coefficient criterion tallied alongside.
#[derive(Debug, Clone)]
pub struct EmpiricalReport {
    pub map: MapId,
    pub flavor: Flavor,
    pub k: u32,
    pub total: u64,
    /// Integers surviving by direct iteration (`T^j(n) >= n` for all
    /// relevant `j`).
    pub survivors: u64,
    /// Integers surviving by the class coefficient criterion.
    pub class_survivors: u64,
    /// Integers where the two tests disagree (finitely many small `n`).
    pub disagreements: u64,
}

impl EmpiricalReport {
    pub fn fraction(&self) -> BigRational {
        BigRational::new(BigInt::from(self.survivors), BigInt::from(self.total))
    }
}

/// Counts `n in 1..=n_max` with stopping time above `k` (strict) or at
/// least `k` (terras), by direct iteration.
pub fn empirical_f(map: MapId, k: u32, n_max: u64, flavor: Flavor) -> Result<EmpiricalReport> {
    let base = require_compressed(map)?;
    // strict tests j = 1..=k, terras j = 1..k
    let j_hi = match flavor {
        Flavor::Strict => k,
        Flavor::Terras => k.saturating_sub(1),
    };
    let (survivors, class_survivors, disagreements) = (1..=n_max)
        .into_par_iter()
        .map(|n0| {
            let n = BigInt::from(n0);
            let mut current = n.clone();
            let mut coeff = BigInt::one();
            let mut numeric = true;
            let mut class = true;
            for j in 1..=j_hi {
                let rec = step(map, &current).expect("compressed maps are total");
                if rec.branch == 0 {
                    coeff *= base;
                }
                current = rec.output;
                if current < n {
                    numeric = false;
                }
                if coeff <= pow_bigint(2, j) {
                    class = false;
                }
                if !numeric && !class {
                    break;
                }
            }
            (numeric as u64, class as u64, (numeric != class) as u64)
        })
        .reduce(|| (0, 0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2));
    Ok(EmpiricalReport {
        map,
        flavor,
        k,
        total: n_max,
        survivors,
        class_survivors,
        disagreements,
    })
}
