//! Generating alphabets, group words and the group-oracle interface.

use crate::error::{Error, Result};
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

pub const PAD: &str = "1";

/// A finite involutive generating alphabet with a distinguished padding
/// letter `1` (its own inverse, representing the identity).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenAlphabet {
    letters: Vec<String>,
    index: HashMap<String, u32>,
    inv: Vec<u32>,
    pad: u32,
}

impl GenAlphabet {
    /// Build an alphabet from explicit (letter, inverse) pairs. A pair with
    /// equal entries declares a self-inverse letter. The pad letter `1` is
    /// appended automatically when absent.
    pub fn from_pairs(pairs: &[(&str, &str)]) -> Arc<GenAlphabet> {
        let mut letters: Vec<String> = Vec::new();
        let mut index = HashMap::new();
        let add = |letters: &mut Vec<String>, index: &mut HashMap<String, u32>, tok: &str| {
            if !index.contains_key(tok) {
                index.insert(tok.to_owned(), letters.len() as u32);
                letters.push(tok.to_owned());
            }
        };
        for (x, xi) in pairs {
            add(&mut letters, &mut index, x);
            add(&mut letters, &mut index, xi);
        }
        add(&mut letters, &mut index, PAD);
        let mut inv = vec![u32::MAX; letters.len()];
        for (x, xi) in pairs {
            let i = index[*x];
            let j = index[*xi];
            inv[i as usize] = j;
            inv[j as usize] = i;
        }
        let pad = index[PAD];
        inv[pad as usize] = pad;
        debug_assert!(inv.iter().all(|&i| i != u32::MAX));
        Arc::new(GenAlphabet { letters, index, inv, pad })
    }

    /// Standard alphabet: for each base symbol `x` adds `x` and `x'`, plus pad.
    pub fn standard(base: &[&str]) -> Arc<GenAlphabet> {
        let primed: Vec<String> = base.iter().map(|x| format!("{x}'")).collect();
        let pairs: Vec<(&str, &str)> = base
            .iter()
            .zip(primed.iter())
            .map(|(x, xi)| (*x, xi.as_str()))
            .collect();
        Self::from_pairs(&pairs)
    }

    /// Alphabet of self-inverse letters plus pad (e.g. Grigorchuk's a,b,c,d).
    pub fn involutive(base: &[&str]) -> Arc<GenAlphabet> {
        let pairs: Vec<(&str, &str)> = base.iter().map(|x| (*x, *x)).collect();
        Self::from_pairs(&pairs)
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn pad(&self) -> u32 {
        self.pad
    }

    pub fn inv(&self, letter: u32) -> u32 {
        self.inv[letter as usize]
    }

    pub fn token(&self, letter: u32) -> &str {
        &self.letters[letter as usize]
    }

    pub fn lookup(&self, token: &str) -> Option<u32> {
        self.index.get(token).copied()
    }

    pub fn tokens(&self) -> impl Iterator<Item = &str> {
        self.letters.iter().map(|s| s.as_str())
    }

    /// Inverse on the token level: `Some(y)` with `y` the inverse letter.
    pub fn inv_token(&self, token: &str) -> Option<&str> {
        self.lookup(token).map(|i| self.token(self.inv(i)))
    }
}

/// A word over a [`GenAlphabet`], stored as letter indices.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupWord {
    alphabet: Arc<GenAlphabet>,
    letters: Vec<u32>,
}

impl std::hash::Hash for GroupWord {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.letters.hash(state);
    }
}

impl GroupWord {
    pub fn empty(alphabet: &Arc<GenAlphabet>) -> GroupWord {
        GroupWord { alphabet: alphabet.clone(), letters: Vec::new() }
    }

    pub fn from_indices(alphabet: &Arc<GenAlphabet>, letters: Vec<u32>) -> GroupWord {
        debug_assert!(letters.iter().all(|&l| (l as usize) < alphabet.len()));
        GroupWord { alphabet: alphabet.clone(), letters }
    }

    pub fn from_tokens<S: AsRef<str>>(
        alphabet: &Arc<GenAlphabet>,
        tokens: &[S],
    ) -> Result<GroupWord> {
        let mut letters = Vec::with_capacity(tokens.len());
        for t in tokens {
            let t = t.as_ref();
            letters.push(
                alphabet
                    .lookup(t)
                    .ok_or_else(|| Error::UnknownLetter(t.to_owned()))?,
            );
        }
        Ok(GroupWord { alphabet: alphabet.clone(), letters })
    }

    /// Parse the shared word file format: whitespace-separated tokens,
    /// `#` starts a comment to end of line.
    pub fn parse(alphabet: &Arc<GenAlphabet>, text: &str) -> Result<GroupWord> {
        let tokens = tokenize(text);
        Self::from_tokens(alphabet, &tokens)
    }

    pub fn alphabet(&self) -> &Arc<GenAlphabet> {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[u32] {
        &self.letters
    }

    pub fn tokens(&self) -> impl Iterator<Item = &str> {
        self.letters.iter().map(|&l| self.alphabet.token(l))
    }

    pub fn push(&mut self, letter: u32) {
        debug_assert!((letter as usize) < self.alphabet.len());
        self.letters.push(letter);
    }

    pub fn push_token(&mut self, token: &str) -> Result<()> {
        let l = self
            .alphabet
            .lookup(token)
            .ok_or_else(|| Error::UnknownLetter(token.to_owned()))?;
        self.letters.push(l);
        Ok(())
    }

    pub fn concat(&self, other: &GroupWord) -> Result<GroupWord> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch(
                "cannot concatenate words over different alphabets".into(),
            ));
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(GroupWord { alphabet: self.alphabet.clone(), letters })
    }

    /// Pad with `1` letters up to `target` length.
    pub fn padded_to(&self, target: usize) -> GroupWord {
        assert!(target >= self.len(), "cannot pad {} letters to {target}", self.len());
        let mut letters = self.letters.clone();
        letters.resize(target, self.alphabet.pad());
        GroupWord { alphabet: self.alphabet.clone(), letters }
    }

    pub fn count_token(&self, token: &str) -> usize {
        match self.alphabet.lookup(token) {
            Some(l) => self.letters.iter().filter(|&&x| x == l).count(),
            None => 0,
        }
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.tokens().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(t)?;
        }
        Ok(())
    }
}

impl fmt::Debug for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupWord(\"{self}\")")
    }
}

/// Split text into word tokens, dropping `#`-comments.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = match line.find('#') {
            Some(i) => &line[..i],
            None => line,
        };
        out.extend(line.split_whitespace().map(|s| s.to_owned()));
    }
    out
}

/// (a_1 ... a_n)^{-1} = a_n^{-1} ... a_1^{-1}.
pub fn word_inverse(w: &GroupWord) -> GroupWord {
    let letters = w
        .letters
        .iter()
        .rev()
        .map(|&l| w.alphabet.inv(l))
        .collect();
    GroupWord { alphabet: w.alphabet.clone(), letters }
}

/// [u, v] = u^{-1} v^{-1} u v.
pub fn commutator_word(u: &GroupWord, v: &GroupWord) -> Result<GroupWord> {
    word_inverse(u)
        .concat(&word_inverse(v))?
        .concat(u)?
        .concat(v)
}

/// Conjugate u^v = v^{-1} u v.
pub fn conjugate_word(u: &GroupWord, v: &GroupWord) -> Result<GroupWord> {
    word_inverse(v).concat(u)?.concat(v)
}

/// Delete pad letters and cancel adjacent x·inv(x) pairs until none remain.
/// The result is the unique reduced form (empty iff w is trivial in the free
/// group on the non-pad letters).
pub fn free_reduce(w: &GroupWord) -> GroupWord {
    let alpha = &w.alphabet;
    let pad = alpha.pad();
    let mut stack: Vec<u32> = Vec::with_capacity(w.len());
    for &l in &w.letters {
        if l == pad {
            continue;
        }
        if stack.last() == Some(&alpha.inv(l)) {
            stack.pop();
        } else {
            stack.push(l);
        }
    }
    GroupWord { alphabet: alpha.clone(), letters: stack }
}

/// The abstract word-problem interface: a total, deterministic triviality test.
pub trait GroupOracle: Sync {
    fn alphabet(&self) -> &Arc<GenAlphabet>;
    fn is_trivial(&self, w: &GroupWord) -> bool;
}

/// Free group on the non-pad letters of the alphabet.
pub struct FreeOracle {
    alphabet: Arc<GenAlphabet>,
}

impl FreeOracle {
    pub fn new(alphabet: Arc<GenAlphabet>) -> FreeOracle {
        FreeOracle { alphabet }
    }
}

impl GroupOracle for FreeOracle {
    fn alphabet(&self) -> &Arc<GenAlphabet> {
        &self.alphabet
    }

    fn is_trivial(&self, w: &GroupWord) -> bool {
        free_reduce(w).is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Arc<GenAlphabet> {
        GenAlphabet::standard(&["a", "b"])
    }

    #[test]
    fn alphabet_involution() {
        let alpha = ab();
        for i in 0..alpha.len() as u32 {
            assert_eq!(alpha.inv(alpha.inv(i)), i);
        }
        assert_eq!(alpha.token(alpha.pad()), "1");
        assert_eq!(alpha.inv(alpha.pad()), alpha.pad());
        assert_eq!(alpha.inv_token("a"), Some("a'"));
        assert_eq!(alpha.inv_token("a'"), Some("a"));
    }

    #[test]
    fn inverse_examples() {
        let alpha = ab();
        let empty = GroupWord::empty(&alpha);
        assert_eq!(word_inverse(&empty), empty);
        let w = GroupWord::parse(&alpha, "a b").unwrap();
        assert_eq!(word_inverse(&w).to_string(), "b' a'");
        assert_eq!(word_inverse(&word_inverse(&w)), w);
    }

    #[test]
    fn commutator_examples() {
        let alpha = ab();
        let u = GroupWord::empty(&alpha);
        let v = GroupWord::parse(&alpha, "a").unwrap();
        assert_eq!(commutator_word(&u, &v).unwrap().to_string(), "a' a");
        let w = GroupWord::parse(&alpha, "a b").unwrap();
        let c = commutator_word(&w, &w).unwrap();
        assert_eq!(c.len(), 4 * w.len());
        assert!(free_reduce(&c).is_empty());
    }

    #[test]
    fn free_reduce_examples() {
        let alpha = GenAlphabet::standard(&["x0", "x1"]);
        let r = |s: &str| free_reduce(&GroupWord::parse(&alpha, s).unwrap()).to_string();
        assert_eq!(r("x0 x0'"), "");
        assert_eq!(r("x0 x1 x1' x0"), "x0 x0");
        assert_eq!(r("x0 1 x0'"), "");
    }

    #[test]
    fn parse_comments_and_errors() {
        let alpha = ab();
        let w = GroupWord::parse(&alpha, "a b # trailing\n# full line\n b'").unwrap();
        assert_eq!(w.to_string(), "a b b'");
        assert!(GroupWord::parse(&alpha, "a q").is_err());
    }

    #[test]
    fn alphabet_mismatch_detected() {
        let u = GroupWord::parse(&ab(), "a").unwrap();
        let v = GroupWord::parse(&GenAlphabet::standard(&["x0"]), "x0").unwrap();
        assert!(u.concat(&v).is_err());
    }
}
