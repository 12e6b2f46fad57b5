//! The Grigorchuk group acting on the binary rooted tree: wreath-recursion
//! sections, two independent word-problem algorithms, and the nested
//! commutator witnesses used by the Barrington compiler.
//!
//! Generators a, b, c, d are all self-inverse and satisfy the wreath
//! recursion a = (0 1), b = ⟨a, c⟩, c = ⟨a, d⟩, d = ⟨1, b⟩.

use crate::words::{GenAlphabet, GroupOracle, GroupWord};
use std::sync::Arc;
use std::sync::OnceLock;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GrigLetter {
    A,
    B,
    C,
    D,
}

use GrigLetter::{A, B, C, D};

pub fn grig_alphabet() -> Arc<GenAlphabet> {
    static ALPHA: OnceLock<Arc<GenAlphabet>> = OnceLock::new();
    ALPHA
        .get_or_init(|| GenAlphabet::involutive(&["a", "b", "c", "d"]))
        .clone()
}

/// Internal compact form: pad letters are dropped on conversion.
pub fn to_letters(w: &GroupWord) -> Vec<GrigLetter> {
    w.tokens()
        .filter_map(|t| match t {
            "a" => Some(A),
            "b" => Some(B),
            "c" => Some(C),
            "d" => Some(D),
            _ => None,
        })
        .collect()
}

pub fn to_word(letters: &[GrigLetter]) -> GroupWord {
    let alpha = grig_alphabet();
    let mut w = GroupWord::empty(&alpha);
    for l in letters {
        let tok = match l {
            A => "a",
            B => "b",
            C => "c",
            D => "d",
        };
        w.push_token(tok).expect("grig letters are in the alphabet");
    }
    w
}

/// Klein four-group product of two distinct letters among {b, c, d}.
fn klein(x: GrigLetter, y: GrigLetter) -> GrigLetter {
    match (x, y) {
        (B, C) | (C, B) => D,
        (B, D) | (D, B) => C,
        (C, D) | (D, C) => B,
        _ => unreachable!("klein is only called on distinct non-a letters"),
    }
}

/// Cancel equal adjacent letters (x² = 1) and merge adjacent {b,c,d} pairs
/// via the Klein table, to a fixed point. The result alternates a-letters
/// and {b,c,d}-letters and represents the same group element.
pub fn grig_reduce(w: &[GrigLetter]) -> Vec<GrigLetter> {
    let mut stack: Vec<GrigLetter> = Vec::with_capacity(w.len());
    for &l in w {
        let mut cur = l;
        loop {
            match stack.last() {
                Some(&top) if top == cur => {
                    stack.pop();
                    break;
                }
                Some(&top) if top != A && cur != A => {
                    stack.pop();
                    cur = klein(top, cur);
                }
                _ => {
                    stack.push(cur);
                    break;
                }
            }
        }
    }
    stack
}

/// Root permutation and first-level sections of a single generator:
/// (swaps, section at 0, section at 1).
fn generator_data(l: GrigLetter) -> (bool, Option<GrigLetter>, Option<GrigLetter>) {
    match l {
        A => (true, None, None),
        B => (false, Some(A), Some(C)),
        C => (false, Some(A), Some(D)),
        D => (false, None, Some(B)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionPair {
    pub root_swap: bool,
    pub sec0: Vec<GrigLetter>,
    pub sec1: Vec<GrigLetter>,
}

/// Left-to-right section computation from (xv)^g = x^π v^{g@x}: for each
/// letter ℓ, the section at x picks up ℓ @ (x ^ π_acc) where π_acc is the
/// accumulated root permutation of the prefix.
pub fn grig_sections(w: &[GrigLetter]) -> SectionPair {
    let mut swap = false;
    let mut sec0 = Vec::new();
    let mut sec1 = Vec::new();
    for &l in w {
        let (s, at0, at1) = generator_data(l);
        let (to0, to1) = if swap { (at1, at0) } else { (at0, at1) };
        if let Some(x) = to0 {
            sec0.push(x);
        }
        if let Some(x) = to1 {
            sec1.push(x);
        }
        swap ^= s;
    }
    SectionPair { root_swap: swap, sec0, sec1 }
}

/// Image of the vertex `v` (a 0/1 string, root end first) under the word.
pub fn grig_act(w: &[GrigLetter], v: &[bool]) -> Vec<bool> {
    let mut out: Vec<bool> = v.to_vec();
    for &l in w {
        apply_generator(l, &mut out);
    }
    out
}

/// Apply one generator to a vertex in place: walk down the tree keeping the
/// current section, which for Grigorchuk generators is again a generator.
fn apply_generator(l: GrigLetter, v: &mut [bool]) {
    let mut cur = Some(l);
    for bit in v.iter_mut() {
        let Some(l) = cur else { return };
        let (s, at0, at1) = generator_data(l);
        let here = *bit;
        if s {
            *bit = !here;
        }
        cur = if here { at1 } else { at0 };
    }
}

/// Exact recursive word problem: reduce, check the root permutation, then
/// recurse on both first-level sections. Sections of a reduced word of
/// length n ≥ 2 are strictly shorter, so the recursion terminates.
pub fn grig_is_trivial(w: &[GrigLetter]) -> bool {
    let w = grig_reduce(w);
    match w.len() {
        0 => true,
        1 => false,
        _ => {
            let sp = grig_sections(&w);
            if sp.root_swap {
                return false;
            }
            grig_is_trivial(&sp.sec0) && grig_is_trivial(&sp.sec1)
        }
    }
}

/// Ball-enumeration word problem: true iff the word fixes every vertex of
/// {0,1}^depth. Streams over the vertices with O(depth) working memory.
pub fn grig_fixes_ball(w: &[GrigLetter], depth: usize) -> bool {
    let mut v = vec![false; depth];
    loop {
        if grig_act(w, &v) != v {
            return false;
        }
        // next vertex in binary-counter order
        let mut i = depth;
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            if !v[i] {
                v[i] = true;
                break;
            }
            v[i] = false;
        }
    }
}

/// Depth used when cross-checking the recursion against ball enumeration.
pub fn ball_depth(word_len: usize) -> usize {
    (usize::BITS - word_len.leading_zeros()) as usize + 4 // ⌈log2(n+1)⌉ + 4
}

const X_WORD: [GrigLetter; 8] = [A, B, A, D, A, B, A, D];
const Y_WORD: [GrigLetter; 9] = [B, A, B, A, D, A, B, A, C];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SensState {
    X,
    Xi,
    Y,
    Yi,
}

/// Transition table of the commutator witnesses:
/// x → (x⁻¹, y⁻¹), x⁻¹ → (y⁻¹, x⁻¹), y → (y, x), y⁻¹ → (x, y).
pub fn sens_step(z: SensState, bit: bool) -> SensState {
    use SensState::*;
    match (z, bit) {
        (X, false) => Xi,
        (X, true) => Yi,
        (Xi, false) => Yi,
        (Xi, true) => Xi,
        (Y, false) => Y,
        (Y, true) => X,
        (Yi, false) => X,
        (Yi, true) => Y,
    }
}

pub fn sens_state(v: &[bool]) -> SensState {
    let mut z = SensState::X;
    for &bit in v {
        z = sens_step(z, bit);
    }
    z
}

pub fn sens_state_word(z: SensState) -> Vec<GrigLetter> {
    match z {
        SensState::X => X_WORD.to_vec(),
        SensState::Xi => X_WORD.iter().rev().copied().collect(),
        SensState::Y => Y_WORD.to_vec(),
        SensState::Yi => Y_WORD.iter().rev().copied().collect(),
    }
}

pub const SENS_LEAF_LEN: usize = 16;

/// z_v with z_ε = x = (abad)², expanded into generators and padded with `1`
/// to the uniform leaf length 16.
pub fn grig_sens_leaf(d: usize, v: &[bool]) -> GroupWord {
    assert_eq!(v.len(), d, "leaf vertex must have length d");
    to_word(&sens_state_word(sens_state(v))).padded_to(SENS_LEAF_LEN)
}

pub struct GrigOracle {
    alphabet: Arc<GenAlphabet>,
}

impl GrigOracle {
    pub fn new() -> GrigOracle {
        GrigOracle { alphabet: grig_alphabet() }
    }
}

impl Default for GrigOracle {
    fn default() -> Self {
        Self::new()
    }
}

impl GroupOracle for GrigOracle {
    fn alphabet(&self) -> &Arc<GenAlphabet> {
        &self.alphabet
    }

    fn is_trivial(&self, w: &GroupWord) -> bool {
        grig_is_trivial(&to_letters(w))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Vec<GrigLetter> {
        to_letters(&GroupWord::parse(&grig_alphabet(), s).unwrap())
    }

    #[test]
    fn reduce_examples() {
        assert!(grig_reduce(&parse("a a")).is_empty());
        assert_eq!(grig_reduce(&parse("b c")), vec![D]);
        assert!(grig_reduce(&parse("b 1 b")).is_empty());
        assert!(grig_reduce(&parse("b c d")).is_empty());
        // alternation invariant
        let r = grig_reduce(&parse("a b b a c d a b"));
        for pair in r.windows(2) {
            assert!((pair[0] == A) != (pair[1] == A));
        }
    }

    #[test]
    fn reduce_agrees_with_tree_action() {
        // a² = 1 and bc = d, checked on the ball of depth 3 and by recursion.
        assert!(grig_fixes_ball(&parse("a a"), 3));
        let mut bcd = parse("b c");
        bcd.push(D); // b c d⁻¹, d self-inverse
        assert!(grig_fixes_ball(&bcd, 3));
        assert!(grig_is_trivial(&bcd));
    }

    #[test]
    fn sections_match_phi_table() {
        let sp = grig_sections(&[B]);
        assert_eq!(sp, SectionPair { root_swap: false, sec0: vec![A], sec1: vec![C] });
        let sp = grig_sections(&[A]);
        assert_eq!(sp, SectionPair { root_swap: true, sec0: vec![], sec1: vec![] });
        let sp = grig_sections(&[C]);
        assert_eq!(sp, SectionPair { root_swap: false, sec0: vec![A], sec1: vec![D] });
        let sp = grig_sections(&[D]);
        assert_eq!(sp, SectionPair { root_swap: false, sec0: vec![], sec1: vec![B] });
    }

    #[test]
    fn act_examples() {
        let v = [false, true];
        assert_eq!(grig_act(&[A], &v), vec![true, true]);
        assert_eq!(grig_act(&[], &v), v.to_vec());
        // d fixes level 1
        for first in [false, true] {
            let v = [first, false, true];
            assert_eq!(grig_act(&[D], &v)[0], first);
        }
    }

    #[test]
    fn triviality_examples() {
        assert!(grig_is_trivial(&[]));
        assert!(!grig_is_trivial(&X_WORD));
        assert!(grig_is_trivial(&parse("d d")));
        for l in [A, B, C, D] {
            assert!(!grig_is_trivial(&[l]));
        }
    }

    #[test]
    fn fixes_ball_examples() {
        assert!(grig_fixes_ball(&[], 5));
        assert!(!grig_fixes_ball(&[A], 1));
        assert!(!grig_fixes_ball(&X_WORD, 3));
    }

    #[test]
    fn sens_leaf_examples() {
        let x = grig_sens_leaf(0, &[]);
        assert_eq!(x.to_string(), "a b a d a b a d 1 1 1 1 1 1 1 1");
        // v = "0" → x⁻¹
        let z0 = grig_sens_leaf(1, &[false]);
        assert_eq!(to_letters(&z0), sens_state_word(SensState::Xi));
        // v = "11": z_1 = y⁻¹, z_11 = y
        let z11 = grig_sens_leaf(2, &[true, true]);
        assert_eq!(to_letters(&z11), sens_state_word(SensState::Y));
        // y = x^b
        let y = sens_state_word(SensState::Y);
        let mut conj = vec![B];
        conj.extend_from_slice(&X_WORD);
        conj.push(B);
        let mut quot: Vec<GrigLetter> = y.iter().rev().copied().collect();
        quot.extend_from_slice(&conj);
        assert!(grig_is_trivial(&quot));
    }

    #[test]
    fn x_and_y_nontrivial() {
        assert!(!grig_is_trivial(&sens_state_word(SensState::X)));
        assert!(!grig_is_trivial(&sens_state_word(SensState::Y)));
    }
}
