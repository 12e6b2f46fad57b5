//! Restricted wreath products G≀ℤ and G≀(ℤ/t): word evaluation, triviality,
//! compressed (SLP-level) evaluation, and the iterated-embedding SLPs.
//!
//! Words use the shift letters `t`, `t'` on top of the base alphabet. A base
//! letter read at prefix exponent sum e multiplies the support entry at
//! position −e on the right (the sign convention is pinned by the
//! `t a t' a'` example below).

use crate::error::{Error, Result};
use crate::grigorchuk;
use crate::perm::Permutation;
use crate::slp::{power_rules, slp_morphism_tower, Slp, SlpBuilder, Sym};
use crate::thompson::{pl_compose, pl_invert, PLMap};
use crate::words::{free_reduce, GenAlphabet, GroupWord};
use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

pub const SHIFT: &str = "t";
pub const SHIFT_INV: &str = "t'";
pub const DEFAULT_SUPPORT_LIMIT: usize = 2_000_000;

/// The base group of a wreath product: elements in some exact normal form
/// with multiplication and an identity test.
pub trait BaseGroup: Sync {
    type Elem: Clone + PartialEq;
    fn alphabet(&self) -> &Arc<GenAlphabet>;
    fn identity(&self) -> Self::Elem;
    fn letter_elem(&self, token: &str) -> Result<Self::Elem>;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_identity(&self, e: &Self::Elem) -> bool;
    /// Group-element equality; structural by default, overridden where the
    /// normal form is not canonical (Grigorchuk).
    fn elems_equal(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        a == b
    }
}

/// An element f·τ^shift of G≀ℤ (modulus None) or G≀(ℤ/t) (modulus Some(t)).
#[derive(Debug, Clone)]
pub struct WreathElement<E> {
    pub modulus: Option<BigUint>,
    pub shift: BigInt,
    pub support: HashMap<BigInt, E>,
}

impl<E: Clone + PartialEq> WreathElement<E> {
    pub fn identity(modulus: Option<BigUint>) -> WreathElement<E> {
        WreathElement { modulus, shift: BigInt::zero(), support: HashMap::new() }
    }

    fn canon_pos(&self, pos: BigInt) -> BigInt {
        match &self.modulus {
            None => pos,
            Some(t) => {
                let t = BigInt::from(t.clone());
                ((pos % &t) + &t) % &t
            }
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.shift.is_zero() && self.support.is_empty()
    }

    fn mul_at<B: BaseGroup<Elem = E>>(&mut self, base: &B, pos: BigInt, e: &E) {
        let pos = self.canon_pos(pos);
        match self.support.remove(&pos) {
            None => {
                if !base.is_identity(e) {
                    self.support.insert(pos, e.clone());
                }
            }
            Some(old) => {
                let prod = base.mul(&old, e);
                if !base.is_identity(&prod) {
                    self.support.insert(pos, prod);
                }
            }
        }
    }

    fn add_shift(&mut self, delta: i64) {
        self.shift += delta;
        if let Some(t) = &self.modulus {
            let t = BigInt::from(t.clone());
            self.shift = ((&self.shift % &t) + &t) % &t;
        }
    }

    /// Right-multiply by `other` using f₁h₁·f₂h₂ = f₁·(^{h₁}f₂)·(h₁h₂):
    /// the entry of `other` at position p lands at p − shift(self).
    pub fn absorb<B: BaseGroup<Elem = E>>(&mut self, base: &B, other: &WreathElement<E>) {
        debug_assert_eq!(self.modulus, other.modulus);
        let h1 = self.shift.clone();
        for (pos, val) in &other.support {
            self.mul_at(base, pos - &h1, val);
        }
        self.shift += &other.shift;
        if let Some(t) = &self.modulus {
            let t = BigInt::from(t.clone());
            self.shift = ((&self.shift % &t) + &t) % &t;
        }
    }

    pub fn equal<B: BaseGroup<Elem = E>>(&self, base: &B, other: &WreathElement<E>) -> bool {
        if self.shift != other.shift || self.support.len() != other.support.len() {
            return false;
        }
        self.support.iter().all(|(pos, val)| {
            other
                .support
                .get(pos)
                .is_some_and(|v| base.elems_equal(val, v))
        })
    }
}

/// η(w) = |w|_t − |w|_{t'}.
pub fn wreath_eta(w: &GroupWord) -> i64 {
    w.count_token(SHIFT) as i64 - w.count_token(SHIFT_INV) as i64
}

pub fn wreath_eval<B: BaseGroup>(
    w: &GroupWord,
    base: &B,
    modulus: Option<BigUint>,
) -> Result<WreathElement<B::Elem>> {
    let mut acc = WreathElement::identity(modulus);
    for tok in w.tokens() {
        match tok {
            SHIFT => acc.add_shift(1),
            SHIFT_INV => acc.add_shift(-1),
            "1" => {}
            _ => {
                let e = base.letter_elem(tok)?;
                let pos = -acc.shift.clone();
                acc.mul_at(base, pos, &e);
            }
        }
    }
    Ok(acc)
}

pub fn wreath_is_trivial<B: BaseGroup>(
    w: &GroupWord,
    base: &B,
    modulus: Option<BigUint>,
) -> Result<bool> {
    Ok(wreath_eval(w, base, modulus)?.is_trivial())
}

/// Compressed evaluation: bottom-up (shift, support) summaries per SLP
/// variable, aborting when any intermediate support exceeds `support_limit`.
pub fn wreath_eval_slp<B: BaseGroup>(
    g: &Slp,
    base: &B,
    modulus: Option<BigUint>,
    support_limit: usize,
) -> Result<WreathElement<B::Elem>> {
    let mut letter_elems: Vec<Option<WreathElement<B::Elem>>> = Vec::new();
    for t in 0..g.num_terms() as u32 {
        let tok = g.term_token(t);
        let mut e = WreathElement::identity(modulus.clone());
        match tok {
            SHIFT => e.add_shift(1),
            SHIFT_INV => e.add_shift(-1),
            "1" => {}
            _ => {
                let el = base.letter_elem(tok)?;
                e.mul_at(base, BigInt::zero(), &el);
            }
        }
        letter_elems.push(Some(e));
    }
    // remaining uses per variable, so summaries can be freed early
    let mut uses = vec![0usize; g.num_vars()];
    for &v in g.topo_order() {
        for sym in g.rhs_of(v) {
            if let Sym::Var(w) = sym {
                uses[*w as usize] += 1;
            }
        }
    }
    uses[g.start_index() as usize] += 1;
    let mut summaries: Vec<Option<WreathElement<B::Elem>>> = vec![None; g.num_vars()];
    for &v in g.topo_order() {
        let mut acc = WreathElement::identity(modulus.clone());
        for sym in g.rhs_of(v) {
            let piece = match sym {
                Sym::Term(t) => letter_elems[*t as usize].as_ref().expect("prebuilt"),
                Sym::Var(w) => summaries[*w as usize]
                    .as_ref()
                    .expect("children precede parents in topo order"),
            };
            acc.absorb(base, piece);
            if acc.support.len() > support_limit {
                return Err(Error::SupportLimitExceeded(support_limit));
            }
        }
        for sym in g.rhs_of(v) {
            if let Sym::Var(w) = sym {
                let w = *w as usize;
                uses[w] -= 1;
                if uses[w] == 0 {
                    summaries[w] = None;
                }
            }
        }
        summaries[v as usize] = Some(acc);
    }
    Ok(summaries[g.start_index() as usize]
        .take()
        .expect("start variable evaluated"))
}

/// Iterated-embedding SLPs: given φ₁ on Σ ∪ {t, t'} with images over Σ,
/// returns SLPs for φ₁ⁿ(g) (base letters g) and for
/// φₙ(τₙ) = φ₁ⁿ(τ₁)·φ₁ⁿ⁻¹(τ₁)⋯φ₁(τ₁) plus its inverse, keys `t` and `t'`.
pub fn phi_n_slps(
    alphabet: &Arc<GenAlphabet>,
    phi1: &HashMap<String, Vec<String>>,
    n: usize,
) -> Result<HashMap<String, Slp>> {
    assert!(n >= 1, "n must be at least 1");
    // totality + inv-consistency of phi1 on Σ ∪ {t, t'}
    let mut full: HashMap<String, Vec<String>> = HashMap::new();
    for tok in alphabet.tokens().chain([SHIFT, SHIFT_INV]) {
        let image = if tok == "1" {
            phi1.get(tok).cloned().unwrap_or_default()
        } else {
            phi1.get(tok)
                .cloned()
                .ok_or_else(|| Error::MissingImage(tok.to_owned()))?
        };
        for im in &image {
            alphabet
                .lookup(im)
                .ok_or_else(|| Error::UnknownLetter(im.clone()))?;
        }
        full.insert(tok.to_owned(), image);
    }
    let inv_of = |tok: &str| -> String {
        match tok {
            SHIFT => SHIFT_INV.to_owned(),
            SHIFT_INV => SHIFT.to_owned(),
            _ => alphabet
                .inv_token(tok)
                .expect("token checked against alphabet")
                .to_owned(),
        }
    };
    for tok in alphabet.tokens().chain([SHIFT, SHIFT_INV]) {
        let image = &full[tok];
        let inv_image: Vec<String> = image.iter().rev().map(|x| inv_of(x)).collect();
        if full[&inv_of(tok)] != inv_image {
            return Err(Error::InvInconsistent(tok.to_owned()));
        }
    }

    let phi_sigma: HashMap<String, Vec<String>> = alphabet
        .tokens()
        .map(|tok| (tok.to_owned(), full[tok].clone()))
        .collect();
    let mut out = HashMap::new();
    for tok in alphabet.tokens() {
        if tok == "1" {
            continue;
        }
        let phis = vec![phi_sigma.clone(); n];
        out.insert(tok.to_owned(), slp_morphism_tower(alphabet, tok, &phis)?);
    }

    // τₙ: vars W{i}_{x} with val = φ₁^i(x), U{i} with val = φ₁^i(τ₁).
    let mut b = SlpBuilder::new();
    let var = |i: usize, tok: &str| format!("W{i}_{tok}");
    for tok in alphabet.tokens() {
        b.rule(&var(0, tok), &[tok]);
    }
    for i in 1..n {
        for tok in alphabet.tokens() {
            let body: Vec<String> = phi_sigma[tok].iter().map(|im| var(i - 1, im)).collect();
            b.rule(&var(i, tok), &body);
        }
    }
    for i in 1..=n {
        let body: Vec<String> = full[SHIFT].iter().map(|im| var(i - 1, im)).collect();
        b.rule(&format!("U{i}"), &body);
    }
    let start: Vec<String> = (1..=n).rev().map(|i| format!("U{i}")).collect();
    b.rule("TAU", &start);
    b.start("TAU");
    let tau = b.build()?;
    let tau_inv = tau.invert(alphabet)?;
    out.insert(SHIFT.to_owned(), tau);
    out.insert(SHIFT_INV.to_owned(), tau_inv);
    Ok(out)
}

/// SLP rules for t^k (negative k uses t'), for splicing into builders.
pub fn shift_power_rules(prefix: &str, k: &BigInt) -> (Vec<(String, Vec<String>)>, String) {
    let letter = if k.is_negative() { SHIFT_INV } else { SHIFT };
    power_rules(prefix, &[letter], k.magnitude())
}

// ---------------------------------------------------------------------------
// Base-group implementations
// ---------------------------------------------------------------------------

/// Finite permutation base (e.g. A5); tokens normalize to permutations.
pub struct PermBase {
    alphabet: Arc<GenAlphabet>,
    gens: Vec<Option<Permutation>>,
    degree: usize,
}

impl PermBase {
    pub fn new(
        alphabet: &Arc<GenAlphabet>,
        map: &HashMap<String, Permutation>,
    ) -> Result<PermBase> {
        let degree = map
            .values()
            .next()
            .map(|p| p.degree())
            .ok_or_else(|| Error::Invalid("empty generator map".into()))?;
        let mut gens = vec![None; alphabet.len()];
        for l in 0..alphabet.len() as u32 {
            let tok = alphabet.token(l);
            if l == alphabet.pad() {
                continue;
            }
            let p = map
                .get(tok)
                .ok_or_else(|| Error::UnknownLetter(tok.to_owned()))?;
            if p.degree() != degree {
                return Err(Error::DegreeMismatch(tok.to_owned()));
            }
            gens[l as usize] = Some(p.clone());
        }
        for l in 0..alphabet.len() as u32 {
            let li = alphabet.inv(l);
            let a = gens[l as usize].clone().unwrap_or_else(|| Permutation::identity(degree));
            let b = gens[li as usize].clone().unwrap_or_else(|| Permutation::identity(degree));
            if b != a.inverse() {
                return Err(Error::InvInconsistent(alphabet.token(l).to_owned()));
            }
        }
        Ok(PermBase { alphabet: alphabet.clone(), gens, degree })
    }
}

impl BaseGroup for PermBase {
    type Elem = Permutation;

    fn alphabet(&self) -> &Arc<GenAlphabet> {
        &self.alphabet
    }

    fn identity(&self) -> Permutation {
        Permutation::identity(self.degree)
    }

    fn letter_elem(&self, token: &str) -> Result<Permutation> {
        let l = self
            .alphabet
            .lookup(token)
            .ok_or_else(|| Error::UnknownLetter(token.to_owned()))?;
        Ok(self.gens[l as usize]
            .clone()
            .unwrap_or_else(|| Permutation::identity(self.degree)))
    }

    fn mul(&self, a: &Permutation, b: &Permutation) -> Permutation {
        a.then(b)
    }

    fn is_identity(&self, e: &Permutation) -> bool {
        e.is_identity()
    }
}

/// Free-group base; normal form is the freely reduced word.
pub struct FreeBase {
    alphabet: Arc<GenAlphabet>,
}

impl FreeBase {
    pub fn new(alphabet: Arc<GenAlphabet>) -> FreeBase {
        FreeBase { alphabet }
    }
}

impl BaseGroup for FreeBase {
    type Elem = GroupWord;

    fn alphabet(&self) -> &Arc<GenAlphabet> {
        &self.alphabet
    }

    fn identity(&self) -> GroupWord {
        GroupWord::empty(&self.alphabet)
    }

    fn letter_elem(&self, token: &str) -> Result<GroupWord> {
        GroupWord::from_tokens(&self.alphabet, &[token])
    }

    fn mul(&self, a: &GroupWord, b: &GroupWord) -> GroupWord {
        free_reduce(&a.concat(b).expect("same alphabet"))
    }

    fn is_identity(&self, e: &GroupWord) -> bool {
        e.is_empty()
    }
}

/// Thompson-style base: letters map to exact PLMaps (canonical normal form).
pub struct PlBase {
    alphabet: Arc<GenAlphabet>,
    gens: Vec<Option<PLMap>>,
}

impl PlBase {
    /// `map` gives a PLMap per positive letter; inverses are derived.
    pub fn new(alphabet: &Arc<GenAlphabet>, map: &HashMap<String, PLMap>) -> Result<PlBase> {
        let mut gens = vec![None; alphabet.len()];
        for (tok, m) in map {
            let l = alphabet
                .lookup(tok)
                .ok_or_else(|| Error::UnknownLetter(tok.clone()))?;
            gens[l as usize] = Some(m.clone());
            gens[alphabet.inv(l) as usize].get_or_insert_with(|| pl_invert(m));
        }
        for l in 0..alphabet.len() as u32 {
            if l != alphabet.pad() && gens[l as usize].is_none() {
                return Err(Error::UnknownLetter(alphabet.token(l).to_owned()));
            }
        }
        Ok(PlBase { alphabet: alphabet.clone(), gens })
    }
}

impl BaseGroup for PlBase {
    type Elem = PLMap;

    fn alphabet(&self) -> &Arc<GenAlphabet> {
        &self.alphabet
    }

    fn identity(&self) -> PLMap {
        PLMap::identity()
    }

    fn letter_elem(&self, token: &str) -> Result<PLMap> {
        let l = self
            .alphabet
            .lookup(token)
            .ok_or_else(|| Error::UnknownLetter(token.to_owned()))?;
        Ok(self.gens[l as usize].clone().unwrap_or_else(PLMap::identity))
    }

    fn mul(&self, a: &PLMap, b: &PLMap) -> PLMap {
        pl_compose(a, b)
    }

    fn is_identity(&self, e: &PLMap) -> bool {
        e.is_identity()
    }
}

/// Grigorchuk base: support values stay words (reduced), identity decided by
/// the recursive word problem with a memo, equality by triviality of u·v⁻¹.
pub struct GrigBase {
    alphabet: Arc<GenAlphabet>,
    memo: Mutex<HashMap<Vec<grigorchuk::GrigLetter>, bool>>,
}

impl GrigBase {
    pub fn new() -> GrigBase {
        GrigBase { alphabet: grigorchuk::grig_alphabet(), memo: Mutex::new(HashMap::new()) }
    }
}

impl Default for GrigBase {
    fn default() -> Self {
        Self::new()
    }
}

impl BaseGroup for GrigBase {
    type Elem = GroupWord;

    fn alphabet(&self) -> &Arc<GenAlphabet> {
        &self.alphabet
    }

    fn identity(&self) -> GroupWord {
        GroupWord::empty(&self.alphabet)
    }

    fn letter_elem(&self, token: &str) -> Result<GroupWord> {
        GroupWord::from_tokens(&self.alphabet, &[token])
    }

    fn mul(&self, a: &GroupWord, b: &GroupWord) -> GroupWord {
        let cat = a.concat(b).expect("same alphabet");
        grigorchuk::to_word(&grigorchuk::grig_reduce(&grigorchuk::to_letters(&cat)))
    }

    fn is_identity(&self, e: &GroupWord) -> bool {
        let letters = grigorchuk::to_letters(e);
        if let Some(&known) = self.memo.lock().expect("memo lock").get(&letters) {
            return known;
        }
        let ans = grigorchuk::grig_is_trivial(&letters);
        self.memo.lock().expect("memo lock").insert(letters, ans);
        ans
    }

    fn elems_equal(&self, a: &GroupWord, b: &GroupWord) -> bool {
        let quot = a
            .concat(&crate::words::word_inverse(b))
            .expect("same alphabet");
        self.is_identity(&quot)
    }
}
