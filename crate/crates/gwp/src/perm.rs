//! Finite permutations and permutation-group word-problem oracles.

use crate::error::{Error, Result};
use crate::words::{GenAlphabet, GroupOracle, GroupWord};
use std::collections::HashMap;
use std::sync::Arc;

/// A permutation of {0, .., degree-1}; `images[i]` is the image of i.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Permutation {
        Permutation { images: (0..degree as u8).collect() }
    }

    pub fn new(images: Vec<u8>) -> Result<Permutation> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if (i as usize) >= n || seen[i as usize] {
                return Err(Error::Invalid(format!("not a bijection: {images:?}")));
            }
            seen[i as usize] = true;
        }
        Ok(Permutation { images })
    }

    /// Build from disjoint cycles, e.g. `&[&[0,1,2,3,4]]` for (0 1 2 3 4).
    pub fn from_cycles(degree: usize, cycles: &[&[u8]]) -> Permutation {
        let mut images: Vec<u8> = (0..degree as u8).collect();
        for cycle in cycles {
            for k in 0..cycle.len() {
                images[cycle[k] as usize] = cycle[(k + 1) % cycle.len()];
            }
        }
        Permutation { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, point: u8) -> u8 {
        self.images[point as usize]
    }

    /// Left-to-right product: (self.then(other))(x) = other(self(x)).
    pub fn then(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: self.images.iter().map(|&i| other.images[i as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u8; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j as usize] = i as u8;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i as u8 == j)
    }
}

/// Word-problem oracle for a group of permutations given by a generator map.
pub struct PermGroupOracle {
    alphabet: Arc<GenAlphabet>,
    gens: Vec<Permutation>,
}

/// Build a permutation-group oracle. The map must cover every non-pad letter,
/// all permutations must share one degree, and it must be inverse-consistent:
/// the image of `inv(x)` is the inverse permutation of the image of `x`.
pub fn perm_group_oracle(
    alphabet: &Arc<GenAlphabet>,
    generator_map: &HashMap<String, Permutation>,
) -> Result<PermGroupOracle> {
    let degree = generator_map
        .values()
        .next()
        .map(|p| p.degree())
        .ok_or_else(|| Error::Invalid("empty generator map".into()))?;
    let mut gens = Vec::with_capacity(alphabet.len());
    for l in 0..alphabet.len() as u32 {
        let tok = alphabet.token(l);
        if l == alphabet.pad() {
            gens.push(Permutation::identity(degree));
            continue;
        }
        let p = generator_map
            .get(tok)
            .ok_or_else(|| Error::UnknownLetter(tok.to_owned()))?;
        if p.degree() != degree {
            return Err(Error::DegreeMismatch(tok.to_owned()));
        }
        gens.push(p.clone());
    }
    for l in 0..alphabet.len() as u32 {
        let li = alphabet.inv(l);
        if gens[li as usize] != gens[l as usize].inverse() {
            return Err(Error::InvInconsistent(alphabet.token(l).to_owned()));
        }
    }
    Ok(PermGroupOracle { alphabet: alphabet.clone(), gens })
}

impl PermGroupOracle {
    pub fn evaluate(&self, w: &GroupWord) -> Permutation {
        let degree = self.gens[0].degree();
        let mut acc = Permutation::identity(degree);
        for &l in w.letters() {
            acc = acc.then(&self.gens[l as usize]);
        }
        acc
    }

    pub fn generator(&self, letter: u32) -> &Permutation {
        &self.gens[letter as usize]
    }
}

impl GroupOracle for PermGroupOracle {
    fn alphabet(&self) -> &Arc<GenAlphabet> {
        &self.alphabet
    }

    fn is_trivial(&self, w: &GroupWord) -> bool {
        self.evaluate(w).is_identity()
    }
}

/// The default finite non-solvable instance: A5 = ⟨s, t⟩ on 5 points with
/// s = (0 1 2 3 4) and t = (0 1 2); letters s, s', t, t', 1.
pub fn a5_alphabet() -> Arc<GenAlphabet> {
    GenAlphabet::standard(&["s", "t"])
}

pub fn a5_generator_map() -> HashMap<String, Permutation> {
    let s = Permutation::from_cycles(5, &[&[0, 1, 2, 3, 4]]);
    let t = Permutation::from_cycles(5, &[&[0, 1, 2]]);
    let mut map = HashMap::new();
    map.insert("s".to_owned(), s.clone());
    map.insert("s'".to_owned(), s.inverse());
    map.insert("t".to_owned(), t.clone());
    map.insert("t'".to_owned(), t.inverse());
    map
}

pub fn a5_oracle() -> PermGroupOracle {
    perm_group_oracle(&a5_alphabet(), &a5_generator_map()).expect("A5 generator map is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::commutator_word;

    #[test]
    fn cycles_and_products() {
        let s = Permutation::from_cycles(5, &[&[0, 1, 2, 3, 4]]);
        assert_eq!(s.apply(4), 0);
        assert!(s.then(&s.inverse()).is_identity());
        let mut p = Permutation::identity(5);
        for _ in 0..5 {
            p = p.then(&s);
        }
        assert!(p.is_identity());
    }

    #[test]
    fn a5_oracle_examples() {
        let oracle = a5_oracle();
        let alpha = oracle.alphabet().clone();
        let empty = GroupWord::empty(&alpha);
        assert!(oracle.is_trivial(&empty));
        let s5 = GroupWord::parse(&alpha, "s s s s s").unwrap();
        assert!(oracle.is_trivial(&s5));
        let st = GroupWord::parse(&alpha, "s t").unwrap();
        assert!(!oracle.is_trivial(&st));
        let s = GroupWord::parse(&alpha, "s").unwrap();
        let t = GroupWord::parse(&alpha, "t").unwrap();
        assert!(!oracle.is_trivial(&commutator_word(&s, &t).unwrap()));
    }

    #[test]
    fn inconsistent_map_rejected() {
        let alpha = a5_alphabet();
        let mut map = a5_generator_map();
        map.insert("s'".into(), Permutation::from_cycles(5, &[&[0, 1]]));
        assert!(perm_group_oracle(&alpha, &map).is_err());
    }
}
