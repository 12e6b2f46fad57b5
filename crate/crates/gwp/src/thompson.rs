//! Thompson's group F as exact dyadic piecewise-linear homeomorphisms of
//! [0,1] (breakpoints dyadic, slopes powers of 2). Includes the word
//! problem, the conjugated commutator witnesses built from the c_v
//! recursion, and the F≀ℤ embedding words.

use crate::error::{Error, Result};
use crate::words::{GenAlphabet, GroupOracle, GroupWord};
use num_bigint::BigInt;
use num_traits::Zero;
use std::cmp::Ordering;
use std::sync::{Arc, OnceLock};

/// numerator / 2^exponent, canonical: numerator odd or exponent 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: BigInt,
    exp: u32,
}

impl Dyadic {
    pub fn new(num: impl Into<BigInt>, exp: u32) -> Dyadic {
        let mut d = Dyadic { num: num.into(), exp };
        d.canonicalize();
        d
    }

    fn canonicalize(&mut self) {
        if self.num.is_zero() {
            self.exp = 0;
            return;
        }
        while self.exp > 0 && (&self.num % 2u32).is_zero() {
            self.num /= 2u32;
            self.exp -= 1;
        }
    }

    pub fn zero() -> Dyadic {
        Dyadic::new(0, 0)
    }

    pub fn one() -> Dyadic {
        Dyadic::new(1, 0)
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    pub fn exponent(&self) -> u32 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        let exp = self.exp.max(other.exp);
        let num = (&self.num << (exp - self.exp)) + (&other.num << (exp - other.exp));
        Dyadic::new(num, exp)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        let exp = self.exp.max(other.exp);
        let num = (&self.num << (exp - self.exp)) - (&other.num << (exp - other.exp));
        Dyadic::new(num, exp)
    }

    /// self · 2^k, exact for any integer k.
    pub fn mul_pow2(&self, k: i64) -> Dyadic {
        if k >= 0 {
            Dyadic::new(&self.num << k as u32, self.exp)
        } else {
            Dyadic::new(self.num.clone(), self.exp + (-k) as u32)
        }
    }

    /// Write the value as odd · 2^e; requires a nonzero value.
    pub fn two_adic(&self) -> (BigInt, i64) {
        assert!(!self.num.is_zero());
        let mut odd = self.num.clone();
        let mut v: i64 = 0;
        while (&odd % 2u32).is_zero() {
            odd /= 2u32;
            v += 1;
        }
        (odd, v - self.exp as i64)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Dyadic) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Dyadic) -> Ordering {
        let exp = self.exp.max(other.exp);
        (&self.num << (exp - self.exp)).cmp(&(&other.num << (exp - other.exp)))
    }
}

impl std::fmt::Display for Dyadic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/2^{}", self.num, self.exp)
        }
    }
}

/// An element of F: an exact piecewise-linear map of [0,1] with dyadic
/// breakpoints and power-of-2 slopes, in canonical (collinear-free) form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PLMap {
    points: Vec<(Dyadic, Dyadic)>,
}

impl PLMap {
    pub fn identity() -> PLMap {
        PLMap {
            points: vec![(Dyadic::zero(), Dyadic::zero()), (Dyadic::one(), Dyadic::one())],
        }
    }

    pub fn new(points: Vec<(Dyadic, Dyadic)>) -> Result<PLMap> {
        if points.len() < 2
            || points.first() != Some(&(Dyadic::zero(), Dyadic::zero()))
            || points.last() != Some(&(Dyadic::one(), Dyadic::one()))
        {
            return Err(Error::Invalid("PLMap must run from (0,0) to (1,1)".into()));
        }
        for w in points.windows(2) {
            if w[0].0 >= w[1].0 || w[0].1 >= w[1].1 {
                return Err(Error::Invalid("PLMap breakpoints must strictly increase".into()));
            }
        }
        let mut m = PLMap { points };
        for i in 0..m.points.len() - 1 {
            m.slope_exp(i)?; // validates power-of-2 slope
        }
        m.canonicalize()?;
        Ok(m)
    }

    pub fn points(&self) -> &[(Dyadic, Dyadic)] {
        &self.points
    }

    /// Slope exponent k of segment i (slope = 2^k).
    fn slope_exp(&self, i: usize) -> Result<i64> {
        let (x0, y0) = &self.points[i];
        let (x1, y1) = &self.points[i + 1];
        let (odd_dy, ey) = y1.sub(y0).two_adic();
        let (odd_dx, ex) = x1.sub(x0).two_adic();
        if odd_dy != odd_dx {
            return Err(Error::Invalid(format!(
                "segment {i} has non-power-of-2 slope"
            )));
        }
        Ok(ey - ex)
    }

    fn canonicalize(&mut self) -> Result<()> {
        let mut out: Vec<(Dyadic, Dyadic)> = vec![self.points[0].clone()];
        for i in 1..self.points.len() - 1 {
            let prev = self.slope_exp(i - 1)?;
            let next = self.slope_exp(i)?;
            if prev != next {
                out.push(self.points[i].clone());
            }
        }
        out.push(self.points.last().expect("nonempty").clone());
        // Removing interior collinear points does not change any slope, but
        // recompute indices against the new list for the invariant check.
        self.points = out;
        Ok(())
    }

    pub fn slopes(&self) -> Vec<i64> {
        (0..self.points.len() - 1)
            .map(|i| self.slope_exp(i).expect("validated at construction"))
            .collect()
    }

    pub fn eval(&self, t: &Dyadic) -> Dyadic {
        debug_assert!(*t >= Dyadic::zero() && *t <= Dyadic::one());
        // last breakpoint with x ≤ t
        let mut i = match self.points.binary_search_by(|(x, _)| x.cmp(t)) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        if i == self.points.len() - 1 {
            i -= 1;
        }
        let (x0, y0) = &self.points[i];
        let k = self.slope_exp(i).expect("validated at construction");
        y0.add(&t.sub(x0).mul_pow2(k))
    }

    pub fn is_identity(&self) -> bool {
        self.points.len() == 2
    }
}

pub fn pl_invert(f: &PLMap) -> PLMap {
    PLMap {
        points: f.points.iter().map(|(x, y)| (y.clone(), x.clone())).collect(),
    }
}

/// h(t) = g(f(t)) — apply `f` first, matching left-to-right word evaluation.
pub fn pl_compose(f: &PLMap, g: &PLMap) -> PLMap {
    if f.is_identity() {
        return g.clone();
    }
    if g.is_identity() {
        return f.clone();
    }
    let f_inv = pl_invert(f);
    let mut xs: Vec<Dyadic> = f.points.iter().map(|(x, _)| x.clone()).collect();
    xs.extend(g.points.iter().map(|(x, _)| f_inv.eval(x)));
    xs.sort();
    xs.dedup();
    let points: Vec<(Dyadic, Dyadic)> = xs
        .into_iter()
        .map(|x| {
            let y = g.eval(&f.eval(&x));
            (x, y)
        })
        .collect();
    PLMap::new(points).expect("composition of F elements stays in F")
}

pub fn pl_is_identity(f: &PLMap) -> bool {
    f.is_identity()
}

pub fn thompson_alphabet() -> Arc<GenAlphabet> {
    static ALPHA: OnceLock<Arc<GenAlphabet>> = OnceLock::new();
    ALPHA
        .get_or_init(|| GenAlphabet::standard(&["x0", "x1"]))
        .clone()
}

/// x0: (0,0), (1/4,1/2), (1/2,3/4), (1,1);
/// x1: identity on [0,1/2], scaled copy of x0 on [1/2,1].
pub fn thompson_generator(which: usize) -> PLMap {
    let d = |n: i64, e: u32| Dyadic::new(n, e);
    match which {
        0 => PLMap::new(vec![
            (d(0, 0), d(0, 0)),
            (d(1, 2), d(1, 1)),
            (d(1, 1), d(3, 2)),
            (d(1, 0), d(1, 0)),
        ])
        .expect("x0 is a valid PLMap"),
        1 => PLMap::new(vec![
            (d(0, 0), d(0, 0)),
            (d(1, 1), d(1, 1)),
            (d(5, 3), d(3, 2)),
            (d(3, 2), d(7, 3)),
            (d(1, 0), d(1, 0)),
        ])
        .expect("x1 is a valid PLMap"),
        _ => panic!("only generators 0 and 1 exist"),
    }
}

pub struct ThompsonOracle {
    alphabet: Arc<GenAlphabet>,
    gens: Vec<Option<PLMap>>, // indexed by letter, None for pad
}

impl ThompsonOracle {
    pub fn new() -> ThompsonOracle {
        let alphabet = thompson_alphabet();
        let x0 = thompson_generator(0);
        let x1 = thompson_generator(1);
        let mut gens = vec![None; alphabet.len()];
        let mut set = |tok: &str, m: PLMap| {
            gens[alphabet.lookup(tok).expect("generator letter") as usize] = Some(m);
        };
        set("x0", x0.clone());
        set("x0'", pl_invert(&x0));
        set("x1", x1.clone());
        set("x1'", pl_invert(&x1));
        ThompsonOracle { alphabet, gens }
    }

    pub fn evaluate(&self, w: &GroupWord) -> PLMap {
        let mut acc = PLMap::identity();
        for &l in w.letters() {
            if let Some(g) = &self.gens[l as usize] {
                acc = pl_compose(&acc, g);
            }
        }
        acc
    }
}

impl Default for ThompsonOracle {
    fn default() -> Self {
        Self::new()
    }
}

impl GroupOracle for ThompsonOracle {
    fn alphabet(&self) -> &Arc<GenAlphabet> {
        &self.alphabet
    }

    fn is_trivial(&self, w: &GroupWord) -> bool {
        self.evaluate(w).is_identity()
    }
}

pub fn thompson_is_trivial(w: &GroupWord) -> bool {
    static ORACLE: OnceLock<ThompsonOracle> = OnceLock::new();
    ORACLE.get_or_init(ThompsonOracle::new).is_trivial(w)
}

fn word(tokens: &[&str]) -> GroupWord {
    GroupWord::from_tokens(&thompson_alphabet(), tokens).expect("thompson tokens")
}

/// g = x₃x₂⁻¹ = (x0⁻² x1 x0²)(x0⁻¹ x1⁻¹ x0).
pub fn thompson_g_word() -> GroupWord {
    word(&["x0'", "x0'", "x1", "x0", "x0", "x0'", "x1'", "x0"])
}

/// c_ε = ε, c_{v0} = x1·c_v, c_{v1} = x0⁻¹·x1·c_v.
pub fn thompson_c_word(v: &[bool]) -> GroupWord {
    let mut c = GroupWord::empty(&thompson_alphabet());
    for &bit in v {
        let step = if bit { word(&["x0'", "x1"]) } else { word(&["x1"]) };
        c = step.concat(&c).expect("same alphabet");
    }
    c
}

/// Uniform SENS leaf length for depth d: the smallest power of two that
/// fits every g^{c_v} with |v| = d (|g| = 8, |c_v| ≤ 2d).
pub fn thompson_leaf_len(d: usize) -> usize {
    (4 * d + 8).next_power_of_two()
}

/// g^{c_v} = c_v⁻¹ · g · c_v, padded with `1` to the uniform length.
pub fn thompson_sens_leaf(d: usize, v: &[bool]) -> GroupWord {
    assert_eq!(v.len(), d, "leaf vertex must have length d");
    let c = thompson_c_word(v);
    crate::words::conjugate_word(&thompson_g_word(), &c)
        .expect("same alphabet")
        .padded_to(thompson_leaf_len(d))
}

/// A generator of the F≀ℤ copy inside F (Guba–Sapir): the shift, or copy
/// generator k ∈ {1,2} conjugated to level i.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WreathGen {
    Shift,
    Copy { k: u8, level: i64 },
}

pub const DEFAULT_LEVEL_BOUND: i64 = 8;

/// Image of a wreath generator as a word over {x0, x1}: shift ↦ x0, copy
/// (k, i) ↦ x0^{-i} wₖ x0^{i} with w₁ = x1 x2 x1⁻², w₂ = x1² x2 x1⁻³ and
/// x2 = x0⁻¹ x1 x0.
pub fn thompson_wreath_image(gen: WreathGen, level_bound: i64) -> Result<GroupWord> {
    match gen {
        WreathGen::Shift => Ok(word(&["x0"])),
        WreathGen::Copy { k, level } => {
            if level.abs() > level_bound {
                return Err(Error::LevelBound(level, level_bound));
            }
            let x2 = ["x0'", "x1", "x0"];
            let mut toks: Vec<&str> = Vec::new();
            match k {
                1 => {
                    toks.push("x1");
                    toks.extend_from_slice(&x2);
                    toks.extend_from_slice(&["x1'", "x1'"]);
                }
                2 => {
                    toks.extend_from_slice(&["x1", "x1"]);
                    toks.extend_from_slice(&x2);
                    toks.extend_from_slice(&["x1'", "x1'", "x1'"]);
                }
                _ => return Err(Error::Invalid(format!("copy generator index {k}"))),
            }
            let w = word(&toks);
            let shift = if level >= 0 {
                crate::slp::slp_power(&["x0"], &(level as u64).into())
            } else {
                crate::slp::slp_power(&["x0'"], &((-level) as u64).into())
            };
            let shift = shift.expand_word(&thompson_alphabet(), 1 << 20)?;
            crate::words::conjugate_word(&w, &shift)
        }
    }
}
