//! Operation words and their composition into a single affine relation.
//!
//! A word is a sequence of middle operations of one of the four word maps,
//! closed by the map's unique end-of-branch operation. Composing the steps
//! yields one relation `c = b*y - a*x` (equivalently `y = (a*x + c)/b`)
//! between a sequence's first and last integer; solving the word backward
//! through the guards yields the residue class of starting integers that
//! realize exactly that word.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::maps::{BranchDef, MapId};
use crate::numtheory::{extended_gcd, ResidueClass};
use crate::{Error, Result};

/// One affine map branch `n -> (mult*n + add) / div`, valid on `guard`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineStep {
    pub mult: BigInt,
    pub add: BigInt,
    pub div: BigInt,
    pub guard: ResidueClass,
    pub label: &'static str,
}

impl AffineStep {
    pub fn from_branch(def: &BranchDef) -> Self {
        AffineStep {
            mult: BigInt::from(def.mult),
            add: BigInt::from(def.add),
            div: BigInt::from(def.div),
            guard: def.guard(),
            label: def.label,
        }
    }

    /// Applies the step; `None` when the division is not exact.
    pub fn apply(&self, n: &BigInt) -> Option<BigInt> {
        let (q, r) = (&self.mult * n + &self.add).div_rem(&self.div);
        r.is_zero().then_some(q)
    }
}

/// The middle-operation alphabet of a word map.
pub fn middle_alphabet(map: MapId) -> Result<Vec<AffineStep>> {
    let branches = word_branches(map)?;
    Ok(branches[..branches.len() - 1]
        .iter()
        .map(AffineStep::from_branch)
        .collect())
}

/// The unique end-of-branch operation of a word map.
pub fn terminal_step(map: MapId) -> Result<AffineStep> {
    let branches = word_branches(map)?;
    Ok(AffineStep::from_branch(branches.last().unwrap()))
}

fn word_branches(map: MapId) -> Result<&'static [BranchDef]> {
    if !map.is_word_map() {
        return Err(Error::NotAWordMap { map });
    }
    Ok(map.branches().unwrap())
}

/// A sequence of middle operations closed by the end-of-branch operation.
///
/// The word has length `L = middle.len() + 2` counted in integers, matching
/// the sequence it generates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OperationWord {
    map: MapId,
    middle: Vec<u8>,
}

impl OperationWord {
    pub fn new(map: MapId, middle: Vec<u8>) -> Result<Self> {
        let alphabet = middle_alphabet(map)?.len() as u8;
        debug_assert!(middle.iter().all(|&i| i < alphabet));
        Ok(OperationWord { map, middle })
    }

    pub fn map(&self) -> MapId {
        self.map
    }

    pub fn middle(&self) -> &[u8] {
        &self.middle
    }

    /// Sequence length in integers.
    pub fn length(&self) -> u32 {
        self.middle.len() as u32 + 2
    }

    /// The concrete steps: middles in order, then the terminal.
    pub fn steps(&self) -> Vec<AffineStep> {
        let alphabet = middle_alphabet(self.map).expect("word map");
        let mut steps: Vec<AffineStep> = self
            .middle
            .iter()
            .map(|&i| alphabet[i as usize].clone())
            .collect();
        steps.push(terminal_step(self.map).expect("word map"));
        steps
    }
}

impl std::fmt::Display for OperationWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let steps = self.steps();
        let labels: Vec<&str> = steps.iter().map(|s| s.label).collect();
        write!(f, "{}", labels.join(";"))
    }
}

/// The composite relation `c = b*y - a*x` of a word, kept unreduced:
/// `a` is the product of the multipliers, `b` the product of the divisors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineMap {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl AffineMap {
    /// `y = (a*x + c)/b`; `None` when not exact.
    pub fn apply(&self, x: &BigInt) -> Option<BigInt> {
        let (q, r) = (&self.a * x + &self.c).div_rem(&self.b);
        r.is_zero().then_some(q)
    }
}

/// Whether a sequence descends (`PG`, start larger than end) or rises
/// (`PP`, start smaller than end).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// "Plus Grand": x >= y.
    PG,
    /// "Plus Petit": x < y.
    PP,
}

impl std::fmt::Display for Direction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Direction::PG => "PG",
            Direction::PP => "PP",
        })
    }
}

/// Composes a word into its affine relation.
///
/// Applying the relation once equals stepwise application for any starting
/// integer of the word's class.
pub fn compose(word: &OperationWord) -> AffineMap {
    let mut a = BigInt::one();
    let mut b = BigInt::one();
    let mut c = BigInt::zero();
    for step in word.steps() {
        // y' = (mult*y + add)/div with y = (a*x + c)/b
        c = &step.mult * c + &step.add * &b;
        a *= &step.mult;
        b *= &step.div;
    }
    AffineMap { a, b, c }
}

/// Endpoint comparison by coefficients: `b > a` means the start exceeds the
/// end (`PG`), `b < a` the opposite (`PP`).
///
/// Valid only when the relation's constant is positive; callers with a
/// nonpositive constant must fall back to comparing explicit members.
pub fn compare_endpoints(rel: &AffineMap) -> Result<Direction> {
    if !rel.c.is_positive() {
        return Err(Error::ComparatorPrecondition {
            c: rel.c.to_string(),
        });
    }
    match rel.b.cmp(&rel.a) {
        std::cmp::Ordering::Greater => Ok(Direction::PG),
        std::cmp::Ordering::Less => Ok(Direction::PP),
        // powers of 2 never equal powers of 3 or 5 beyond 1 = 1, which no
        // word produces
        std::cmp::Ordering::Equal => unreachable!("coprime prime-power coefficients"),
    }
}

/// Direction of a family, falling back to explicit members when the
/// composite constant is not positive.
///
/// The fallback compares two members far enough out that the ordering is
/// stable for every later member, which is the regime the densities
/// describe.
pub fn family_direction(rel: &AffineMap, x_class: &ResidueClass) -> Direction {
    if let Ok(dir) = compare_endpoints(rel) {
        return dir;
    }
    let gap = (&rel.b - &rel.a).abs();
    let q = rel.c.abs() / (&gap * x_class.modulus()) + 2;
    let x1 = x_class.rep() + x_class.modulus() * &q;
    let x2 = &x1 + x_class.modulus();
    let y1 = rel.apply(&x1).expect("member of the class");
    let y2 = rel.apply(&x2).expect("member of the class");
    let d1 = if x1 >= y1 { Direction::PG } else { Direction::PP };
    let d2 = if x2 >= y2 { Direction::PG } else { Direction::PP };
    assert_eq!(d1, d2, "direction must be stable beyond the crossover");
    d1
}

/// A word together with the residue classes realizing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceFamily {
    pub word: OperationWord,
    pub x_class: ResidueClass,
    pub y_class: ResidueClass,
    pub relation: AffineMap,
    pub direction: Direction,
    /// End integer of the representative sequence (the image of the least
    /// nonnegative starting representative).
    pub end0: BigInt,
}

impl SequenceFamily {
    /// Least nonnegative starting integer.
    pub fn start0(&self) -> &BigInt {
        self.x_class.rep()
    }

    /// The representative sequence: every integer from start to end.
    pub fn realize(&self) -> Vec<BigInt> {
        realize_from(&self.word, self.start0())
    }

    /// Sequence length in integers.
    pub fn length(&self) -> u32 {
        self.word.length()
    }
}

/// Applies a word stepwise, returning all `L` integers of the sequence.
pub fn realize_from(word: &OperationWord, start: &BigInt) -> Vec<BigInt> {
    let mut values = vec![start.clone()];
    let mut current = start.clone();
    for step in word.steps() {
        current = step.apply(&current).expect("member of the word's class");
        values.push(current.clone());
    }
    values
}

/// Solves a word: the class of starting integers that follow exactly its
/// operations, obtained by pulling each guard backward through the
/// preceding step.
///
/// The starting class modulus is the product of the step divisors and the
/// end class modulus is the product of the multipliers.
pub fn solve_word(word: &OperationWord) -> Result<SequenceFamily> {
    let mut constraint = ResidueClass::all();
    for step in word.steps().iter().rev() {
        constraint = pull_back(step, &constraint)?;
    }
    let relation = compose(word);
    debug_assert_eq!(constraint.modulus(), &relation.b);

    let x0 = constraint.rep().clone();
    let end0 = relation
        .apply(&x0)
        .expect("composite relation is exact on the class");
    debug_assert_eq!(*realize_from(word, &x0).last().unwrap(), end0);

    let y_class = ResidueClass::new(end0.clone(), relation.a.clone())?;
    let direction = family_direction(&relation, &constraint);
    Ok(SequenceFamily {
        word: word.clone(),
        x_class: constraint,
        y_class,
        relation,
        direction,
        end0,
    })
}

/// Inputs `n` in the step's guard with `step(n)` in `target`:
/// `mult*n + add = div * t` for `t` in `target`.
fn pull_back(step: &AffineStep, target: &ResidueClass) -> Result<ResidueClass> {
    let m = &step.div * target.modulus();
    let rhs = (&step.div * target.rep() - &step.add).mod_floor(&m);
    // mult is coprime to the power-of-two modulus
    let (g, inv, _) = extended_gcd(&step.mult, &m)?;
    debug_assert!(g.is_one());
    let rep = (inv * rhs).mod_floor(&m);
    let class = ResidueClass::new(rep, m)?;
    class.intersect(&step.guard).ok_or(Error::InfeasibleWord)
}

/// Translates an auxiliary-map family to the corresponding accelerated-map
/// family: starts map by `2n - 1`, ends by `3n - 1` (or `5n - 2`), and the
/// relation becomes `(m*a, 2*b, m*a + 2m*c - 2e*b)` for end transform
/// `m*n - e`.
///
/// The direction is recomputed; it can flip relative to the auxiliary
/// family.
pub fn transform_family_to_u(fam: &SequenceFamily) -> Result<SequenceFamily> {
    let (u_map, m, e) = match fam.word.map() {
        MapId::FrakU3 => (MapId::U3Grouped, 3i64, 1i64),
        MapId::FrakU5 => (MapId::U5Grouped, 5, 2),
        other => return Err(Error::NotAWordMap { map: other }),
    };
    let word = OperationWord::new(u_map, fam.word.middle().to_vec())?;

    let a = BigInt::from(m) * &fam.relation.a;
    let b = BigInt::from(2) * &fam.relation.b;
    let c = &a + BigInt::from(2 * m) * &fam.relation.c - BigInt::from(e) * &b;
    let relation = AffineMap { a, b, c };

    let x0 = fam.start0() * 2 - 1;
    let end0 = &fam.end0 * m - e;
    debug_assert_eq!(relation.apply(&x0), Some(end0.clone()));
    debug_assert_eq!(*realize_from(&word, &x0).last().unwrap(), end0);

    let x_class = ResidueClass::new(x0, relation.b.clone())?;
    let y_class = ResidueClass::new(end0.clone(), relation.a.clone())?;
    let direction = family_direction(&relation, &x_class);
    Ok(SequenceFamily {
        word,
        x_class,
        y_class,
        relation,
        direction,
        end0,
    })
}
