//! Straight-line programs: acyclic grammars deriving exactly one word,
//! with random access, counting, slicing, inversion, powers and
//! iterated-morphism towers — all without decompression.

use crate::error::{Error, Result};
use crate::words::{GenAlphabet, GroupWord};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::HashMap;
use std::sync::Arc;

pub const DEFAULT_EXPAND_LIMIT: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sym {
    Var(u32),
    Term(u32),
}

/// A validated SLP. Variables are the rule heads; every other token in a
/// right-hand side is a terminal. Validation established acyclicity and
/// cached the per-variable lengths.
#[derive(Debug, Clone)]
pub struct Slp {
    vars: Vec<String>,
    terms: Vec<String>,
    rhs: Vec<Vec<Sym>>,
    start: u32,
    topo: Vec<u32>, // children before parents
    lens: Vec<BigUint>,
}

/// Unvalidated rule set; `build` runs `slp_validate`.
#[derive(Debug, Clone, Default)]
pub struct SlpBuilder {
    start: Option<String>,
    rules: Vec<(String, Vec<String>)>,
}

impl SlpBuilder {
    pub fn new() -> SlpBuilder {
        SlpBuilder::default()
    }

    pub fn start(&mut self, var: &str) -> &mut Self {
        self.start = Some(var.to_owned());
        self
    }

    pub fn rule<S: AsRef<str>>(&mut self, head: &str, rhs: &[S]) -> &mut Self {
        self.rules.push((
            head.to_owned(),
            rhs.iter().map(|t| t.as_ref().to_owned()).collect(),
        ));
        self
    }

    pub fn rules<S: AsRef<str>>(
        &mut self,
        rules: impl IntoIterator<Item = (String, Vec<S>)>,
    ) -> &mut Self {
        for (head, rhs) in rules {
            self.rule(&head, &rhs);
        }
        self
    }

    pub fn build(&self) -> Result<Slp> {
        let start = self.start.clone().ok_or(Error::SlpMissingStart)?;
        let mut var_index: HashMap<&str, u32> = HashMap::new();
        for (head, _) in &self.rules {
            if var_index.insert(head, var_index.len() as u32).is_some() {
                return Err(Error::SlpDuplicateRule(head.clone()));
            }
        }
        let start = *var_index
            .get(start.as_str())
            .ok_or(Error::SlpMissingStart)?;
        let vars: Vec<String> = self.rules.iter().map(|(h, _)| h.clone()).collect();
        let mut terms: Vec<String> = Vec::new();
        let mut term_index: HashMap<&str, u32> = HashMap::new();
        let mut rhs: Vec<Vec<Sym>> = Vec::with_capacity(self.rules.len());
        for (_, body) in &self.rules {
            let mut syms = Vec::with_capacity(body.len());
            for tok in body {
                if let Some(&v) = var_index.get(tok.as_str()) {
                    syms.push(Sym::Var(v));
                } else {
                    let t = *term_index.entry(tok).or_insert_with(|| {
                        terms.push(tok.clone());
                        terms.len() as u32 - 1
                    });
                    syms.push(Sym::Term(t));
                }
            }
            rhs.push(syms);
        }
        // Iterative three-color DFS: topological order plus cycle witness.
        let n = vars.len();
        let mut color = vec![0u8; n]; // 0 white, 1 gray, 2 black
        let mut topo: Vec<u32> = Vec::with_capacity(n);
        for root in 0..n as u32 {
            if color[root as usize] != 0 {
                continue;
            }
            let mut stack: Vec<(u32, usize)> = vec![(root, 0)];
            color[root as usize] = 1;
            while let Some(&(v, i)) = stack.last() {
                let body = &rhs[v as usize];
                if i == body.len() {
                    color[v as usize] = 2;
                    topo.push(v);
                    stack.pop();
                    continue;
                }
                stack.last_mut().expect("nonempty").1 += 1;
                if let Sym::Var(c) = body[i] {
                    match color[c as usize] {
                        0 => {
                            color[c as usize] = 1;
                            stack.push((c, 0));
                        }
                        1 => return Err(Error::SlpCycle(vars[c as usize].clone())),
                        _ => {}
                    }
                }
            }
        }
        let mut lens = vec![BigUint::zero(); n];
        for &v in &topo {
            let mut len = BigUint::zero();
            for sym in &rhs[v as usize] {
                match sym {
                    Sym::Var(c) => len += &lens[*c as usize],
                    Sym::Term(_) => len += 1u32,
                }
            }
            lens[v as usize] = len;
        }
        Ok(Slp { vars, terms, rhs, start, topo, lens })
    }
}

impl Slp {
    /// SLP for a literal word.
    pub fn from_tokens<S: AsRef<str>>(tokens: &[S]) -> Slp {
        let mut b = SlpBuilder::new();
        b.start("S").rule("S", tokens);
        b.build().expect("literal SLP is valid")
    }

    pub fn start_var(&self) -> &str {
        &self.vars[self.start as usize]
    }

    pub fn start_index(&self) -> u32 {
        self.start
    }

    /// Variable indices with children before parents.
    pub fn topo_order(&self) -> &[u32] {
        &self.topo
    }

    pub fn rhs_of(&self, var: u32) -> &[Sym] {
        &self.rhs[var as usize]
    }

    pub fn term_token(&self, term: u32) -> &str {
        &self.terms[term as usize]
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.vars
    }

    /// |g| = sum of all right-hand-side lengths.
    pub fn size(&self) -> usize {
        self.rhs.iter().map(|r| r.len()).sum()
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    /// |val(g)|, cached at validation time.
    pub fn length(&self) -> &BigUint {
        &self.lens[self.start as usize]
    }

    fn sym_token(&self, sym: Sym) -> &str {
        match sym {
            Sym::Var(v) => &self.vars[v as usize],
            Sym::Term(t) => &self.terms[t as usize],
        }
    }

    /// Number of occurrences of `letter` in val(g), bottom-up.
    pub fn count(&self, letter: &str) -> BigUint {
        let target = self.terms.iter().position(|t| t == letter);
        let Some(target) = target else {
            return BigUint::zero();
        };
        let mut counts = vec![BigUint::zero(); self.vars.len()];
        for &v in &self.topo {
            let mut c = BigUint::zero();
            for sym in &self.rhs[v as usize] {
                match sym {
                    Sym::Var(w) => c += &counts[*w as usize],
                    Sym::Term(t) if *t as usize == target => c += 1u32,
                    Sym::Term(_) => {}
                }
            }
            counts[v as usize] = c;
        }
        counts.swap_remove(self.start as usize)
    }

    /// val(g) as terminal tokens, refusing expansions longer than `limit`.
    pub fn expand(&self, limit: u64) -> Result<Vec<String>> {
        let len = self.length();
        if len > &BigUint::from(limit) {
            return Err(Error::ExpansionTooLong(len.clone(), limit));
        }
        let len = len.to_usize().expect("length fits usize under limit");
        let mut out: Vec<String> = Vec::with_capacity(len);
        let mut stack: Vec<(u32, usize)> = vec![(self.start, 0)];
        while let Some(&(v, i)) = stack.last() {
            let body = &self.rhs[v as usize];
            if i == body.len() {
                stack.pop();
                continue;
            }
            stack.last_mut().expect("nonempty").1 += 1;
            match body[i] {
                Sym::Term(t) => out.push(self.terms[t as usize].clone()),
                Sym::Var(w) => stack.push((w, 0)),
            }
        }
        Ok(out)
    }

    /// Expand into a `GroupWord` over the given alphabet.
    pub fn expand_word(&self, alphabet: &Arc<GenAlphabet>, limit: u64) -> Result<GroupWord> {
        GroupWord::from_tokens(alphabet, &self.expand(limit)?)
    }

    /// val(g)[p], 0-based, by descending the derivation with cached lengths.
    pub fn at(&self, p: &BigUint) -> Result<&str> {
        if p >= self.length() {
            return Err(Error::PositionOutOfRange(p.clone(), self.length().clone()));
        }
        let mut p = p.clone();
        let mut v = self.start;
        'descend: loop {
            for sym in &self.rhs[v as usize] {
                match sym {
                    Sym::Term(t) => {
                        if p.is_zero() {
                            return Ok(&self.terms[*t as usize]);
                        }
                        p -= 1u32;
                    }
                    Sym::Var(w) => {
                        let wl = &self.lens[*w as usize];
                        if &p < wl {
                            v = *w;
                            continue 'descend;
                        }
                        p -= wl;
                    }
                }
            }
            unreachable!("position was checked against cached lengths");
        }
    }

    /// SLP for val(g)[p:q], both ends inclusive.
    pub fn substring(&self, p: &BigUint, q: &BigUint) -> Result<Slp> {
        if p > q {
            return Err(Error::InvalidRange(p.clone(), q.clone()));
        }
        if q >= self.length() {
            return Err(Error::PositionOutOfRange(q.clone(), self.length().clone()));
        }
        let mut out = SubstringBuilder {
            slp: self,
            builder: SlpBuilder::new(),
            copied: vec![false; self.vars.len()],
        };
        let top = out.slice(self.start, p.clone(), q.clone());
        let start = fresh_name(&self.vars, &self.terms, "S");
        out.builder.rule(&start, &top);
        out.builder.start(&start);
        out.builder.build()
    }

    /// SLP with val = word_inverse(val(g)): every rhs reversed, terminals
    /// replaced by their alphabet inverses.
    pub fn invert(&self, alphabet: &GenAlphabet) -> Result<Slp> {
        let mut b = SlpBuilder::new();
        b.start(self.start_var());
        for (v, body) in self.rhs.iter().enumerate() {
            let toks: Vec<String> = body
                .iter()
                .rev()
                .map(|&sym| match sym {
                    Sym::Var(w) => Ok(self.vars[w as usize].clone()),
                    Sym::Term(t) => {
                        let tok = &self.terms[t as usize];
                        alphabet
                            .inv_token(tok)
                            .map(|s| s.to_owned())
                            .ok_or_else(|| Error::UnknownLetter(tok.clone()))
                    }
                })
                .collect::<Result<_>>()?;
            b.rule(&self.vars[v], &toks);
        }
        b.build()
    }

    /// All rules as token sequences with every variable renamed through
    /// `prefix` — for splicing this SLP into a larger one.
    pub fn rules_prefixed(&self, prefix: &str) -> Vec<(String, Vec<String>)> {
        self.rhs
            .iter()
            .enumerate()
            .map(|(v, body)| {
                let head = format!("{prefix}{}", self.vars[v]);
                let toks = body
                    .iter()
                    .map(|&sym| match sym {
                        Sym::Var(w) => format!("{prefix}{}", self.vars[w as usize]),
                        Sym::Term(t) => self.terms[t as usize].clone(),
                    })
                    .collect();
                (head, toks)
            })
            .collect()
    }

    /// Like `rules_prefixed`, but also rewrites terminal tokens through `f`
    /// (used for the 0/1 substitutions of the reduction pipeline).
    pub fn rules_substituted(
        &self,
        prefix: &str,
        f: impl Fn(&str) -> Vec<String>,
    ) -> Vec<(String, Vec<String>)> {
        self.rhs
            .iter()
            .enumerate()
            .map(|(v, body)| {
                let head = format!("{prefix}{}", self.vars[v]);
                let mut toks = Vec::with_capacity(body.len());
                for &sym in body {
                    match sym {
                        Sym::Var(w) => toks.push(format!("{prefix}{}", self.vars[w as usize])),
                        Sym::Term(t) => toks.extend(f(&self.terms[t as usize])),
                    }
                }
                (head, toks)
            })
            .collect()
    }

    /// Sanity bound |val(g)| ≤ 3^{|g|/3}, checked exactly as
    /// |val(g)|³ ≤ 3^{|g|}.
    pub fn satisfies_length_bound(&self) -> bool {
        self.length().pow(3) <= BigUint::from(3u32).pow(self.size() as u32)
    }

    /// Parse the SLP file format: `start <Var>`, then `<Var> -> <tok> ...`.
    pub fn parse(text: &str) -> Result<Slp> {
        let mut b = SlpBuilder::new();
        let mut saw_start = false;
        for line in text.lines() {
            let line = match line.find('#') {
                Some(i) => &line[..i],
                None => line,
            };
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.is_empty() {
                continue;
            }
            if !saw_start {
                if toks.len() != 2 || toks[0] != "start" {
                    return Err(Error::Parse(format!(
                        "expected `start <Var>`, got `{}`",
                        line.trim()
                    )));
                }
                b.start(toks[1]);
                saw_start = true;
                continue;
            }
            if toks.len() < 2 || toks[1] != "->" {
                return Err(Error::Parse(format!(
                    "expected `<Var> -> ...`, got `{}`",
                    line.trim()
                )));
            }
            b.rule(toks[0], &toks[2..]);
        }
        if !saw_start {
            return Err(Error::SlpMissingStart);
        }
        b.build()
    }

    /// Serialize in the SLP file format.
    pub fn to_file_string(&self) -> String {
        let mut out = format!("start {}\n", self.start_var());
        for (v, body) in self.rhs.iter().enumerate() {
            out.push_str(&self.vars[v]);
            out.push_str(" ->");
            for &sym in body {
                out.push(' ');
                out.push_str(self.sym_token(sym));
            }
            out.push('\n');
        }
        out
    }
}

fn fresh_name(vars: &[String], terms: &[String], base: &str) -> String {
    let mut name = base.to_owned();
    let mut k = 0usize;
    while vars.iter().any(|v| v == &name) || terms.iter().any(|t| t == &name) {
        name = format!("{base}_{k}");
        k += 1;
    }
    name
}

struct SubstringBuilder<'a> {
    slp: &'a Slp,
    builder: SlpBuilder,
    copied: Vec<bool>,
}

impl SubstringBuilder<'_> {
    /// Make sure variable `v` of the source SLP is available verbatim.
    fn copy_full(&mut self, v: u32) {
        if self.copied[v as usize] {
            return;
        }
        self.copied[v as usize] = true;
        let syms: Vec<Sym> = self.slp.rhs[v as usize].clone();
        let body: Vec<String> = syms.iter().map(|&sym| self.slp.sym_token(sym).to_owned()).collect();
        for &sym in &syms {
            if let Sym::Var(w) = sym {
                self.copy_full(w);
            }
        }
        let head = self.slp.vars[v as usize].clone();
        self.builder.rule(&head, &body);
    }

    /// Token sequence deriving val(v)[lo:hi], inclusive.
    fn slice(&mut self, v: u32, lo: BigUint, hi: BigUint) -> Vec<String> {
        if lo.is_zero() && hi == &self.slp.lens[v as usize] - 1u32 {
            self.copy_full(v);
            return vec![self.slp.vars[v as usize].clone()];
        }
        let mut out = Vec::new();
        let mut offset = BigUint::zero();
        let syms: Vec<Sym> = self.slp.rhs[v as usize].clone();
        for &sym in &syms {
            let sym_len = match sym {
                Sym::Var(w) => self.slp.lens[w as usize].clone(),
                Sym::Term(_) => BigUint::one(),
            };
            if sym_len.is_zero() {
                continue;
            }
            let end = &offset + &sym_len - 1u32; // last position covered
            if end >= lo && offset <= hi {
                let child_lo = if lo > offset { &lo - &offset } else { BigUint::zero() };
                let child_hi = if hi < end { &hi - &offset } else { sym_len - 1u32 };
                match sym {
                    Sym::Term(t) => out.push(self.slp.terms[t as usize].clone()),
                    Sym::Var(w) => out.extend(self.slice(w, child_lo, child_hi)),
                }
            }
            offset += match sym {
                Sym::Var(w) => self.slp.lens[w as usize].clone(),
                Sym::Term(_) => BigUint::one(),
            };
            if offset > hi {
                break;
            }
        }
        out
    }
}

/// Doubling rules for `base`^e under fresh names `{prefix}…`; returns the
/// rules and the head variable name. `base` tokens are spliced verbatim, so
/// they may reference variables of an enclosing rule set.
pub fn power_rules<S: AsRef<str>>(
    prefix: &str,
    base: &[S],
    e: &BigUint,
) -> (Vec<(String, Vec<String>)>, String) {
    let mut rules: Vec<(String, Vec<String>)> = Vec::new();
    let base_var = format!("{prefix}base");
    rules.push((
        base_var.clone(),
        base.iter().map(|t| t.as_ref().to_owned()).collect(),
    ));
    if e.is_zero() {
        let head = format!("{prefix}p0");
        rules.push((head.clone(), Vec::new()));
        return (rules, head);
    }
    let bits = e.to_radix_be(2);
    let mut cur = base_var.clone(); // bits[0] is always 1
    for (k, &bit) in bits.iter().enumerate().skip(1) {
        let next = format!("{prefix}p{k}");
        let mut body = vec![cur.clone(), cur.clone()];
        if bit == 1 {
            body.push(base_var.clone());
        }
        rules.push((next.clone(), body));
        cur = next;
    }
    (rules, cur)
}

/// SLP for w^e via binary doubling; size O(|w| + log e).
pub fn slp_power<S: AsRef<str>>(word: &[S], e: &BigUint) -> Slp {
    let (rules, head) = power_rules("", word, e);
    let mut b = SlpBuilder::new();
    b.start(&head);
    for (h, body) in rules {
        b.rule(&h, &body);
    }
    b.build().expect("power SLP is valid")
}

/// Substitute an SLP per terminal of `g`: the result derives val(g) with
/// every letter x replaced by val(images[x]) and the pad letter dropped.
/// Size is |g| plus the sizes of the images actually used.
pub fn slp_substitute(g: &Slp, images: &HashMap<String, Slp>) -> Result<Slp> {
    let mut toks: Vec<&str> = (0..g.num_terms() as u32).map(|t| g.term_token(t)).collect();
    toks.sort_unstable();
    toks.dedup();
    let mut b = SlpBuilder::new();
    let mut heads: HashMap<String, String> = HashMap::new();
    for (i, tok) in toks.iter().enumerate() {
        if *tok == crate::words::PAD {
            continue;
        }
        let img = images
            .get(*tok)
            .ok_or_else(|| Error::MissingImage((*tok).to_owned()))?;
        let prefix = format!("M{i}_");
        b.rules(img.rules_prefixed(&prefix));
        heads.insert((*tok).to_owned(), format!("{prefix}{}", img.start_var()));
    }
    b.rules(g.rules_substituted("T_", |tok| {
        if tok == crate::words::PAD {
            Vec::new()
        } else {
            vec![heads[tok].clone()]
        }
    }));
    b.start(&format!("T_{}", g.start_var()));
    b.build()
}

/// SLP for φ₁(φ₂(⋯φₙ(a₀)⋯)). Each morphism must be total on the alphabet;
/// one variable layer per morphism, so the size is linear in n·Σ|images|.
pub fn slp_morphism_tower(
    alphabet: &Arc<GenAlphabet>,
    a0: &str,
    phis: &[HashMap<String, Vec<String>>],
) -> Result<Slp> {
    alphabet
        .lookup(a0)
        .ok_or_else(|| Error::UnknownLetter(a0.to_owned()))?;
    for phi in phis {
        for tok in alphabet.tokens() {
            let image = phi
                .get(tok)
                .ok_or_else(|| Error::MissingImage(tok.to_owned()))?;
            for im in image {
                alphabet
                    .lookup(im)
                    .ok_or_else(|| Error::UnknownLetter(im.clone()))?;
            }
        }
    }
    let mut b = SlpBuilder::new();
    let n = phis.len();
    if n == 0 {
        b.start("S").rule("S", &[a0]);
        return b.build();
    }
    // val(V_{i,x}) = φ₁(φ₂(…φᵢ(x)…)); here phis[i-1] is φᵢ.
    let var = |i: usize, tok: &str| format!("L{i}_{tok}");
    for tok in alphabet.tokens() {
        b.rule(&var(1, tok), &phis[0][tok]);
    }
    for i in 2..=n {
        for tok in alphabet.tokens() {
            let body: Vec<String> = phis[i - 1][tok].iter().map(|im| var(i - 1, im)).collect();
            b.rule(&var(i, tok), &body);
        }
    }
    b.start(&var(n, a0));
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab_doubling(n: usize) -> Slp {
        // A_n -> A_{n-1} A_{n-1}, ..., A_0 -> a b; val = (ab)^{2^n}
        let mut b = SlpBuilder::new();
        b.start(&format!("A{n}"));
        b.rule("A0", &["a", "b"]);
        for i in 1..=n {
            let prev = format!("A{}", i - 1);
            b.rule(&format!("A{i}"), &[prev.as_str(), prev.as_str()]);
        }
        b.build().unwrap()
    }

    #[test]
    fn validate_basics() {
        let mut b = SlpBuilder::new();
        b.start("S").rule("S", &["a"]);
        let g = b.build().unwrap();
        assert_eq!(g.length(), &BigUint::from(1u32));
        assert_eq!(g.count("a"), BigUint::from(1u32));

        let mut b = SlpBuilder::new();
        b.start("S").rule("S", &["S", "a"]);
        assert!(matches!(b.build(), Err(Error::SlpCycle(_))));

        let mut b = SlpBuilder::new();
        b.start("S").rule("S", &["a"]).rule("S", &["b"]);
        assert!(matches!(b.build(), Err(Error::SlpDuplicateRule(_))));

        let g = ab_doubling(7);
        assert_eq!(g.length(), &BigUint::from(256u32));
    }

    #[test]
    fn expand_examples() {
        let mut b = SlpBuilder::new();
        b.start("S").rule("S", &["A", "A"]).rule("A", &["a", "b"]);
        let g = b.build().unwrap();
        assert_eq!(g.expand(100).unwrap().join(" "), "a b a b");

        let g = ab_doubling(3);
        let w = g.expand(100).unwrap();
        assert_eq!(w.len(), 16);
        for (i, t) in w.iter().enumerate() {
            assert_eq!(t, if i % 2 == 0 { "a" } else { "b" });
        }
        assert!(matches!(g.expand(15), Err(Error::ExpansionTooLong(_, 15))));
    }

    #[test]
    fn length_and_count() {
        let g = ab_doubling(10);
        assert_eq!(g.length(), &BigUint::from(2048u32));
        assert_eq!(g.count("a"), BigUint::from(1024u32));
        assert_eq!(g.count("b"), BigUint::from(1024u32));
        assert_eq!(g.count("zzz"), BigUint::zero());
    }

    #[test]
    fn at_examples() {
        let g = ab_doubling(3);
        assert_eq!(g.at(&BigUint::from(3u32)).unwrap(), "b");
        assert!(g.at(&BigUint::from(16u32)).is_err());
    }

    #[test]
    fn substring_examples() {
        let mut b = SlpBuilder::new();
        b.start("S").rule("S", &["a", "b"]);
        let g = b.build().unwrap();
        let h = g
            .substring(&BigUint::zero(), &BigUint::zero())
            .unwrap();
        assert_eq!(h.expand(10).unwrap(), vec!["a"]);

        let g = ab_doubling(4);
        let h = g
            .substring(&BigUint::zero(), &(g.length() - 1u32))
            .unwrap();
        assert_eq!(h.expand(100).unwrap(), g.expand(100).unwrap());

        let h = g.substring(&BigUint::from(3u32), &BigUint::from(8u32)).unwrap();
        assert_eq!(h.expand(100).unwrap().join(" "), "b a b a b a");
        assert!(g.substring(&BigUint::from(5u32), &BigUint::from(2u32)).is_err());
    }

    #[test]
    fn invert_examples() {
        let alpha = GenAlphabet::standard(&["a", "b"]);
        let g = Slp::from_tokens(&["a"]);
        assert_eq!(g.invert(&alpha).unwrap().expand(10).unwrap(), vec!["a'"]);
        let g = Slp::from_tokens(&["a", "b"]);
        assert_eq!(
            g.invert(&alpha).unwrap().expand(10).unwrap().join(" "),
            "b' a'"
        );
        let g = Slp::from_tokens(&["q"]);
        assert!(g.invert(&alpha).is_err());
    }

    #[test]
    fn power_examples() {
        let g = slp_power(&["t"], &BigUint::zero());
        assert!(g.expand(10).unwrap().is_empty());
        let g = slp_power(&["t"], &BigUint::from(5u32));
        assert_eq!(g.expand(10).unwrap().join(" "), "t t t t t");
        let g = slp_power(&["t"], &BigUint::from(2u64).pow(40));
        assert!(g.size() <= 4 * 40);
        assert_eq!(g.length(), &BigUint::from(2u64).pow(40));
        assert!(g.satisfies_length_bound());
    }

    #[test]
    fn morphism_tower_examples() {
        let alpha = GenAlphabet::standard(&["a", "b"]);
        let g = slp_morphism_tower(&alpha, "a", &[]).unwrap();
        assert_eq!(g.expand(10).unwrap(), vec!["a"]);

        // φ: a→ab, b→ba (and identity elsewhere), applied 3 times to a.
        let mut phi: HashMap<String, Vec<String>> = HashMap::new();
        for tok in alpha.tokens() {
            phi.insert(tok.to_owned(), vec![tok.to_owned()]);
        }
        phi.insert("a".into(), vec!["a".into(), "b".into()]);
        phi.insert("b".into(), vec!["b".into(), "a".into()]);
        let g = slp_morphism_tower(&alpha, "a", &[phi.clone(), phi.clone(), phi.clone()]).unwrap();
        assert_eq!(g.expand(100).unwrap().join(" "), "a b b a b a a b");

        // Identity morphism applied n times.
        let mut ident: HashMap<String, Vec<String>> = HashMap::new();
        for tok in alpha.tokens() {
            ident.insert(tok.to_owned(), vec![tok.to_owned()]);
        }
        let g = slp_morphism_tower(&alpha, "b", &vec![ident; 5]).unwrap();
        assert_eq!(g.expand(10).unwrap(), vec!["b"]);

        let mut partial: HashMap<String, Vec<String>> = HashMap::new();
        partial.insert("a".into(), vec!["a".into()]);
        assert!(matches!(
            slp_morphism_tower(&alpha, "a", &[partial]),
            Err(Error::MissingImage(_))
        ));
    }

    #[test]
    fn file_format_round_trip() {
        let text = "# comment\nstart S\nS -> A A b\nA -> a\nE ->\n";
        let g = Slp::parse(text).unwrap();
        assert_eq!(g.expand(10).unwrap().join(" "), "a a b");
        let g2 = Slp::parse(&g.to_file_string()).unwrap();
        assert_eq!(g2.expand(10).unwrap(), g.expand(10).unwrap());
    }

    #[test]
    fn length_bound_on_examples() {
        for g in [ab_doubling(5), Slp::from_tokens(&["a"])] {
            assert!(g.satisfies_length_bound());
        }
    }
}
