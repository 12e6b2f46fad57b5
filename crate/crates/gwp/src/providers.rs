//! The five shipped SENS providers: A5 (commutator-table walk), free groups
//! F2 and F3, the Grigorchuk group, and Thompson's group F.

use crate::barrington::SensProvider;
use crate::grigorchuk::{grig_alphabet, grig_sens_leaf, GrigOracle, SENS_LEAF_LEN};
use crate::perm::{a5_alphabet, a5_oracle, PermGroupOracle, Permutation};
use crate::thompson::{thompson_alphabet, thompson_leaf_len, thompson_sens_leaf, ThompsonOracle};
use crate::words::{FreeOracle, GenAlphabet, GroupOracle, GroupWord};
use std::collections::HashMap;
use std::sync::Arc;

/// bin(v): v read as a binary number, first bit most significant.
pub fn bin_of(v: &[bool]) -> usize {
    v.iter().fold(0usize, |acc, &b| acc * 2 + b as usize)
}

/// A5 provider. Every nontrivial element of A5 is a commutator; for each
/// element we precompute the least pair (h1, h2) with g = [h1, h2], where
/// elements are ordered by their minimal word over s < s' < t < t' (shortest
/// first, then lexicographic). leaf(d, v) walks the table from the least
/// nontrivial element g_ε, descending to h1 on bit 0 and h2 on bit 1, and
/// emits the reached element's minimal word, padded to a fixed power of 2.
pub struct A5SensProvider {
    alphabet: Arc<GenAlphabet>,
    oracle: PermGroupOracle,
    /// minimal words per element rank (rank 0 = identity)
    words: Vec<Vec<u32>>,
    /// for each nontrivial rank g, the (rank(h1), rank(h2)) with g = [h1,h2]
    table: Vec<(usize, usize)>,
    leaf_len: usize,
}

impl A5SensProvider {
    pub fn new() -> A5SensProvider {
        let alphabet = a5_alphabet();
        let oracle = a5_oracle();
        // letters in token-lex order s < s' < t < t', excluding the pad
        let mut letters: Vec<u32> = (0..alphabet.len() as u32)
            .filter(|&l| l != alphabet.pad())
            .collect();
        letters.sort_by(|&a, &b| alphabet.token(a).cmp(alphabet.token(b)));

        // BFS from the identity: the first word reaching each element is its
        // minimal word in (length, lex) order.
        let id = Permutation::identity(5);
        let mut rank: HashMap<Permutation, usize> = HashMap::new();
        let mut elems: Vec<Permutation> = vec![id.clone()];
        let mut words: Vec<Vec<u32>> = vec![Vec::new()];
        rank.insert(id, 0);
        let mut frontier = 0;
        while frontier < elems.len() {
            let end = elems.len();
            for i in frontier..end {
                let base = elems[i].clone();
                let word = words[i].clone();
                for &l in &letters {
                    let next = base.then(oracle.generator(l));
                    if !rank.contains_key(&next) {
                        rank.insert(next.clone(), elems.len());
                        elems.push(next);
                        let mut w = word.clone();
                        w.push(l);
                        words.push(w);
                    }
                }
            }
            frontier = end;
        }
        assert_eq!(elems.len(), 60, "A5 has 60 elements");

        // Least commutator pair per nontrivial element, pairs ordered by
        // (rank(h1), rank(h2)).
        let mut table = vec![(0usize, 0usize); elems.len()];
        for g in 1..elems.len() {
            'search: for r1 in 1..elems.len() {
                for r2 in 1..elems.len() {
                    let (h1, h2) = (&elems[r1], &elems[r2]);
                    let comm = h1.inverse().then(&h2.inverse()).then(h1).then(h2);
                    if comm == elems[g] {
                        table[g] = (r1, r2);
                        break 'search;
                    }
                }
            }
            assert_ne!(table[g], (0, 0), "every nontrivial A5 element is a commutator");
        }

        let max_len = words.iter().map(|w| w.len()).max().unwrap();
        let leaf_len = max_len.next_power_of_two();
        A5SensProvider { alphabet, oracle, words, table, leaf_len }
    }
}

impl Default for A5SensProvider {
    fn default() -> Self {
        Self::new()
    }
}

impl SensProvider for A5SensProvider {
    fn name(&self) -> &'static str {
        "a5"
    }

    fn alphabet(&self) -> &Arc<GenAlphabet> {
        &self.alphabet
    }

    fn oracle(&self) -> &dyn GroupOracle {
        &self.oracle
    }

    fn leaf_len(&self, _d: usize) -> usize {
        self.leaf_len
    }

    fn leaf(&self, d: usize, v: &[bool]) -> GroupWord {
        assert_eq!(v.len(), d);
        let mut g = 1; // least nontrivial element
        for &bit in v {
            let (h1, h2) = self.table[g];
            g = if bit { h2 } else { h1 };
        }
        GroupWord::from_indices(&self.alphabet, self.words[g].clone()).padded_to(self.leaf_len)
    }
}

/// Free group F2 = ⟨x0, x1⟩ with leaves x0^{-bin(v)} x1 x0^{bin(v)},
/// padded to L(d) = 2^{d+2}.
pub struct F2SensProvider {
    alphabet: Arc<GenAlphabet>,
    oracle: FreeOracle,
}

impl F2SensProvider {
    pub fn new() -> F2SensProvider {
        let alphabet = GenAlphabet::standard(&["x0", "x1"]);
        let oracle = FreeOracle::new(alphabet.clone());
        F2SensProvider { alphabet, oracle }
    }
}

impl Default for F2SensProvider {
    fn default() -> Self {
        Self::new()
    }
}

impl SensProvider for F2SensProvider {
    fn name(&self) -> &'static str {
        "f2"
    }

    fn alphabet(&self) -> &Arc<GenAlphabet> {
        &self.alphabet
    }

    fn oracle(&self) -> &dyn GroupOracle {
        &self.oracle
    }

    fn leaf_len(&self, d: usize) -> usize {
        // pad 2·bin(v)+1 ≤ 2·2^d + 1 up to the next power of 2
        (2 * (1usize << d) + 1).next_power_of_two()
    }

    fn leaf(&self, d: usize, v: &[bool]) -> GroupWord {
        assert_eq!(v.len(), d);
        let e = bin_of(v);
        let x0 = self.alphabet.lookup("x0").unwrap();
        let x0i = self.alphabet.inv(x0);
        let x1 = self.alphabet.lookup("x1").unwrap();
        let mut letters = vec![x0i; e];
        letters.push(x1);
        letters.extend(std::iter::repeat(x0).take(e));
        GroupWord::from_indices(&self.alphabet, letters).padded_to(self.leaf_len(d))
    }
}

/// Free group F3 = ⟨x0, x1, x2⟩ with single-letter leaves x_{bin(v) mod 3}.
pub struct F3SensProvider {
    alphabet: Arc<GenAlphabet>,
    oracle: FreeOracle,
}

impl F3SensProvider {
    pub fn new() -> F3SensProvider {
        let alphabet = GenAlphabet::standard(&["x0", "x1", "x2"]);
        let oracle = FreeOracle::new(alphabet.clone());
        F3SensProvider { alphabet, oracle }
    }
}

impl Default for F3SensProvider {
    fn default() -> Self {
        Self::new()
    }
}

impl SensProvider for F3SensProvider {
    fn name(&self) -> &'static str {
        "f3"
    }

    fn alphabet(&self) -> &Arc<GenAlphabet> {
        &self.alphabet
    }

    fn oracle(&self) -> &dyn GroupOracle {
        &self.oracle
    }

    fn leaf_len(&self, _d: usize) -> usize {
        1
    }

    fn leaf(&self, d: usize, v: &[bool]) -> GroupWord {
        assert_eq!(v.len(), d);
        let tok = format!("x{}", bin_of(v) % 3);
        let l = self.alphabet.lookup(&tok).unwrap();
        GroupWord::from_indices(&self.alphabet, vec![l])
    }
}

/// Grigorchuk-group provider; leaves from the portrait recursion, uniform
/// length 16.
pub struct GrigSensProvider {
    alphabet: Arc<GenAlphabet>,
    oracle: GrigOracle,
}

impl GrigSensProvider {
    pub fn new() -> GrigSensProvider {
        GrigSensProvider { alphabet: grig_alphabet(), oracle: GrigOracle::new() }
    }
}

impl Default for GrigSensProvider {
    fn default() -> Self {
        Self::new()
    }
}

impl SensProvider for GrigSensProvider {
    fn name(&self) -> &'static str {
        "grigorchuk"
    }

    fn alphabet(&self) -> &Arc<GenAlphabet> {
        &self.alphabet
    }

    fn oracle(&self) -> &dyn GroupOracle {
        &self.oracle
    }

    fn leaf_len(&self, _d: usize) -> usize {
        SENS_LEAF_LEN
    }

    fn leaf(&self, d: usize, v: &[bool]) -> GroupWord {
        grig_sens_leaf(d, v)
    }
}

/// Thompson's-F provider; leaves g^{c_v} with length (4d+8) rounded up to a
/// power of 2.
pub struct ThompsonSensProvider {
    alphabet: Arc<GenAlphabet>,
    oracle: ThompsonOracle,
}

impl ThompsonSensProvider {
    pub fn new() -> ThompsonSensProvider {
        ThompsonSensProvider { alphabet: thompson_alphabet(), oracle: ThompsonOracle::new() }
    }
}

impl Default for ThompsonSensProvider {
    fn default() -> Self {
        Self::new()
    }
}

impl SensProvider for ThompsonSensProvider {
    fn name(&self) -> &'static str {
        "thompson"
    }

    fn alphabet(&self) -> &Arc<GenAlphabet> {
        &self.alphabet
    }

    fn oracle(&self) -> &dyn GroupOracle {
        &self.oracle
    }

    fn leaf_len(&self, d: usize) -> usize {
        thompson_leaf_len(d)
    }

    fn leaf(&self, d: usize, v: &[bool]) -> GroupWord {
        thompson_sens_leaf(d, v)
    }
}

/// All shipped providers, for test sweeps and CLI lookups.
pub fn provider_by_name(name: &str) -> Option<Box<dyn SensProvider>> {
    match name {
        "a5" => Some(Box::new(A5SensProvider::new())),
        "f2" => Some(Box::new(F2SensProvider::new())),
        "f3" => Some(Box::new(F3SensProvider::new())),
        "grigorchuk" => Some(Box::new(GrigSensProvider::new())),
        "thompson" => Some(Box::new(ThompsonSensProvider::new())),
        _ => None,
    }
}

pub const PROVIDER_NAMES: [&str; 5] = ["a5", "f2", "f3", "grigorchuk", "thompson"];
