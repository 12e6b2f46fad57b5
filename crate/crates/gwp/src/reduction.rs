//! The compressed-word-problem hardness pipeline: DAG circuits with nand
//! gates, input preprocessing, the circuit → super-decreasing-subsetsum
//! encoding, the S(t̄) string SLPs, and assembly of the wreath-product SLPs
//! whose triviality mirrors a universal leaf-string condition.

use crate::barrington::parse_num;
use crate::error::{Error, Result};
use crate::slp::{power_rules, Slp, SlpBuilder};
use crate::words::{GenAlphabet, GroupWord};
use crate::wreath::{wreath_eval_slp, BaseGroup, WreathElement, SHIFT, SHIFT_INV};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use std::sync::Arc;

/// A gate input: a circuit input x_i (1-based), a constant, or an earlier
/// nand gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Src {
    Input(usize),
    C0,
    C1,
    Gate(usize),
}

/// A DAG circuit of two-input nand gates over inputs x_1..x_m and constants
/// c0/c1. Gates are stored producers-first; outputs y_0..y_{n-1} are
/// distinct nand gates of fan-out zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DagCircuit {
    pub n_inputs: usize,
    pub gate_names: Vec<String>,
    pub gates: Vec<(Src, Src)>,
    pub outputs: Vec<usize>,
}

impl DagCircuit {
    pub fn new(
        n_inputs: usize,
        gate_names: Vec<String>,
        gates: Vec<(Src, Src)>,
        outputs: Vec<usize>,
    ) -> Result<DagCircuit> {
        if gate_names.len() != gates.len() {
            return Err(Error::Invalid("one name per gate required".into()));
        }
        for (g, &(a, b)) in gates.iter().enumerate() {
            for src in [a, b] {
                match src {
                    Src::Input(i) if i == 0 || i > n_inputs => {
                        return Err(Error::Invalid(format!(
                            "gate {} reads input x{i} of {n_inputs}",
                            gate_names[g]
                        )))
                    }
                    Src::Gate(k) if k >= g => {
                        return Err(Error::Invalid(format!(
                            "gate {} reads a gate not defined before it",
                            gate_names[g]
                        )))
                    }
                    _ => {}
                }
            }
        }
        if outputs.is_empty() {
            return Err(Error::Invalid("circuit needs at least one output".into()));
        }
        let mut seen = vec![false; gates.len()];
        for &g in &outputs {
            if g >= gates.len() {
                return Err(Error::Invalid("output names an unknown gate".into()));
            }
            if seen[g] {
                return Err(Error::Invalid(format!(
                    "outputs must be distinct gates; `{}` repeats",
                    gate_names[g]
                )));
            }
            seen[g] = true;
        }
        // outputs must have fan-out zero
        for &(a, b) in &gates {
            for src in [a, b] {
                if let Src::Gate(k) = src {
                    if seen[k] {
                        return Err(Error::Invalid(format!(
                            "output gate `{}` has fan-out > 0",
                            gate_names[k]
                        )));
                    }
                }
            }
        }
        Ok(DagCircuit { n_inputs, gate_names, gates, outputs })
    }

    pub fn n_outputs(&self) -> usize {
        self.outputs.len()
    }

    pub fn gate_index(&self, name: &str) -> Option<usize> {
        self.gate_names.iter().position(|n| n == name)
    }

    /// Parse the DAG circuit file format: `circuit`, `inputs <m>`,
    /// `gate <name> = nand <src> <src>` lines, `output <i> <gatename>` lines.
    /// Sources are `x<i>`, `c0`, `c1`, or names of earlier gates.
    pub fn parse(text: &str) -> Result<DagCircuit> {
        let mut n_inputs: Option<usize> = None;
        let mut gate_names: Vec<String> = Vec::new();
        let mut gates: Vec<(Src, Src)> = Vec::new();
        let mut outputs: Vec<(usize, String)> = Vec::new();
        let mut saw_header = false;
        for line in text.lines() {
            let line = match line.find('#') {
                Some(i) => &line[..i],
                None => line,
            };
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.is_empty() {
                continue;
            }
            if !saw_header {
                if toks != ["circuit"] {
                    return Err(Error::Parse("file must begin with `circuit`".into()));
                }
                saw_header = true;
                continue;
            }
            match toks[0] {
                "inputs" if toks.len() == 2 => {
                    if n_inputs.replace(parse_num(toks[1])?).is_some() {
                        return Err(Error::Parse("duplicate `inputs` line".into()));
                    }
                }
                "gate" if toks.len() == 6 && toks[2] == "=" && toks[3] == "nand" => {
                    let name = toks[1];
                    let m = n_inputs
                        .ok_or_else(|| Error::Parse("`inputs` must precede gates".into()))?;
                    let parse_src = |tok: &str| -> Result<Src> {
                        match tok {
                            "c0" => Ok(Src::C0),
                            "c1" => Ok(Src::C1),
                            _ => {
                                if let Some(rest) = tok.strip_prefix('x') {
                                    if let Ok(i) = rest.parse::<usize>() {
                                        if i == 0 || i > m {
                                            return Err(Error::Parse(format!(
                                                "input x{i} out of range 1..{m}"
                                            )));
                                        }
                                        return Ok(Src::Input(i));
                                    }
                                }
                                gate_names
                                    .iter()
                                    .position(|n| n == tok)
                                    .map(Src::Gate)
                                    .ok_or_else(|| {
                                        Error::Parse(format!("unknown source `{tok}`"))
                                    })
                            }
                        }
                    };
                    let a = parse_src(toks[4])?;
                    let b = parse_src(toks[5])?;
                    if gate_names.iter().any(|n| n == name) {
                        return Err(Error::Parse(format!("duplicate gate `{name}`")));
                    }
                    gate_names.push(name.to_owned());
                    gates.push((a, b));
                }
                "output" if toks.len() == 3 => {
                    outputs.push((parse_num(toks[1])?, toks[2].to_owned()));
                }
                _ => return Err(Error::Parse(format!("cannot parse line `{}`", line.trim()))),
            }
        }
        let n_inputs = n_inputs.ok_or_else(|| Error::Parse("missing `inputs` line".into()))?;
        let n = outputs.len();
        let mut out_gates = vec![usize::MAX; n];
        for (i, name) in outputs {
            if i >= n {
                return Err(Error::Parse(format!(
                    "output indices must be 0..{}, got {i}",
                    n - 1
                )));
            }
            let g = gate_names
                .iter()
                .position(|gn| gn == &name)
                .ok_or_else(|| Error::Parse(format!("unknown output gate `{name}`")))?;
            if out_gates[i] != usize::MAX {
                return Err(Error::Parse(format!("duplicate output index {i}")));
            }
            out_gates[i] = g;
        }
        DagCircuit::new(n_inputs, gate_names, gates, out_gates)
    }

    pub fn to_file_string(&self) -> String {
        let mut out = format!("circuit\ninputs {}\n", self.n_inputs);
        let src = |s: Src| match s {
            Src::Input(i) => format!("x{i}"),
            Src::C0 => "c0".into(),
            Src::C1 => "c1".into(),
            Src::Gate(k) => self.gate_names[k].clone(),
        };
        for (g, &(a, b)) in self.gates.iter().enumerate() {
            out.push_str(&format!("gate {} = nand {} {}\n", self.gate_names[g], src(a), src(b)));
        }
        for (i, &g) in self.outputs.iter().enumerate() {
            out.push_str(&format!("output {i} {}\n", self.gate_names[g]));
        }
        out
    }
}

/// Evaluate all outputs on input bits x_1..x_m.
pub fn dag_eval(c: &DagCircuit, x: &[bool]) -> Result<Vec<bool>> {
    if x.len() != c.n_inputs {
        return Err(Error::InputLength { expected: c.n_inputs, got: x.len() });
    }
    let mut vals = Vec::with_capacity(c.gates.len());
    for &(a, b) in &c.gates {
        let get = |s: Src, vals: &[bool]| match s {
            Src::Input(i) => x[i - 1],
            Src::C0 => false,
            Src::C1 => true,
            Src::Gate(k) => vals[k],
        };
        let (va, vb) = (get(a, &vals), get(b, &vals));
        vals.push(!(va && vb));
    }
    Ok(c.outputs.iter().map(|&g| vals[g]).collect())
}

fn fresh_gate_name(existing: &[String], base: &str) -> String {
    let mut name = base.to_owned();
    while existing.iter().any(|n| n == &name) {
        name.push('_');
    }
    name
}

/// Insert the double-negation gadget: for every input x_i two new gates
/// x̄_i = nand(x_i, c1) and x̄̄_i = nand(x̄_i, x̄_i); x̄̄_i takes over all former
/// uses of x_i, so every input gains fan-out exactly one. Semantics are
/// unchanged.
pub fn preprocess_inputs(c: &DagCircuit) -> DagCircuit {
    let m = c.n_inputs;
    if m == 0 {
        return c.clone();
    }
    let mut gate_names: Vec<String> = Vec::with_capacity(c.gates.len() + 2 * m);
    let mut gates: Vec<(Src, Src)> = Vec::with_capacity(c.gates.len() + 2 * m);
    for i in 1..=m {
        let bar = fresh_gate_name(&c.gate_names, &format!("xbar{i}"));
        let barbar = fresh_gate_name(&c.gate_names, &format!("xbarbar{i}"));
        gate_names.push(bar);
        gates.push((Src::Input(i), Src::C1));
        gate_names.push(barbar);
        gates.push((Src::Gate(2 * (i - 1)), Src::Gate(2 * (i - 1))));
    }
    let remap = |s: Src| match s {
        Src::Input(i) => Src::Gate(2 * (i - 1) + 1),
        Src::Gate(k) => Src::Gate(k + 2 * m),
        other => other,
    };
    for &(a, b) in &c.gates {
        gates.push((remap(a), remap(b)));
    }
    gate_names.extend(c.gate_names.iter().cloned());
    let outputs = c.outputs.iter().map(|&g| g + 2 * m).collect();
    DagCircuit::new(c.n_inputs, gate_names, gates, outputs)
        .expect("preprocessing preserves validity")
}

/// The subsetsum encoding of a circuit: targets q_i per output, input
/// weights r_i (distinct decreasing powers of 4), and the super-decreasing
/// weight sequence s.
#[derive(Debug, Clone)]
pub struct SubsetsumData {
    pub q: Vec<BigUint>,
    pub r: Vec<BigUint>,
    pub s: Vec<BigUint>,
    pub n_outputs: usize,
}

/// Encode a preprocessed circuit (every input has fan-out 1 into its own
/// gate) into subsetsum numbers with the property: C(α)_i = 1 iff
/// q_i + α·r̄ is a subset sum of s.
///
/// The canonical reverse-topological gate order is: all gates that do not
/// directly consume an input, in reverse definition order, followed by the
/// input-consuming gates for x_m, …, x_1 (this makes r_1 > ⋯ > r_m). Gate
/// g at position i (1-based) owns in-edges e_{2i+n-2} (first source) and
/// e_{2i+n-1}; the imaginary out-edge of output y_i is e_i.
pub fn circuit_to_subsetsum(c: &DagCircuit) -> Result<SubsetsumData> {
    let m = c.n_inputs;
    let p = c.gates.len();
    let n = c.outputs.len();
    // locate the unique consumer gate of each input
    let mut bar = vec![usize::MAX; m];
    for (g, &(a, b)) in c.gates.iter().enumerate() {
        for src in [a, b] {
            if let Src::Input(i) = src {
                if bar[i - 1] != usize::MAX {
                    return Err(Error::Invalid(format!(
                        "input x{i} has fan-out > 1; run preprocessing first"
                    )));
                }
                bar[i - 1] = g;
            }
        }
    }
    for (i, &g) in bar.iter().enumerate() {
        if g == usize::MAX {
            return Err(Error::Invalid(format!(
                "input x{} has fan-out 0; run preprocessing first",
                i + 1
            )));
        }
    }
    let mut is_bar = vec![false; p];
    for &g in &bar {
        if is_bar[g] {
            return Err(Error::Invalid(
                "two inputs share a consumer gate; run preprocessing first".into(),
            ));
        }
        is_bar[g] = true;
    }
    // reverse topological order: non-consumers reversed, then x̄_m..x̄_1
    let mut order: Vec<usize> = (0..p).rev().filter(|&g| !is_bar[g]).collect();
    order.extend(bar.iter().rev().copied());
    let mut pos = vec![0usize; p]; // 1-based position of each gate
    for (i, &g) in order.iter().enumerate() {
        pos[g] = i + 1;
    }
    // reverse-topological: every edge must go from a later to an earlier
    // position
    for (g, &(a, b)) in c.gates.iter().enumerate() {
        for src in [a, b] {
            if let Src::Gate(k) = src {
                if pos[k] <= pos[g] {
                    return Err(Error::Invalid(format!(
                        "no admissible gate order: `{}` feeds `{}`",
                        c.gate_names[k], c.gate_names[g]
                    )));
                }
            }
        }
    }
    // edge sources: e_0..e_{n-1} leave the outputs; gate at position i owns
    // in-edges e_{2i+n-2}, e_{2i+n-1}
    let num_edges = 2 * p + n;
    let mut edge_source: Vec<Src> = vec![Src::C0; num_edges];
    for (i, &g) in c.outputs.iter().enumerate() {
        edge_source[i] = Src::Gate(g);
    }
    for (g, &(a, b)) in c.gates.iter().enumerate() {
        let i = pos[g];
        edge_source[2 * i + n - 2] = a;
        edge_source[2 * i + n - 1] = b;
    }
    let pow4 = |j: usize| BigUint::from(4u32).pow(j as u32);
    // I: edges leaving c1 or a nand gate
    let in_i: Vec<bool> = edge_source
        .iter()
        .map(|s| matches!(s, Src::C1 | Src::Gate(_)))
        .collect();
    let q: Vec<BigUint> = (0..n)
        .map(|i| {
            let mut sum = BigUint::zero();
            for (j, &inc) in in_i.iter().enumerate() {
                if inc && j != i {
                    sum += pow4(j);
                }
            }
            sum
        })
        .collect();
    let r: Vec<BigUint> = (0..m)
        .map(|i| {
            let j = edge_source
                .iter()
                .position(|&s| s == Src::Input(i + 1))
                .expect("every input has an edge");
            pow4(j)
        })
        .collect();
    for w in r.windows(2) {
        assert!(w[0] > w[1], "gate order guarantees decreasing r");
    }
    let mut s: Vec<BigUint> = Vec::with_capacity(3 * p);
    for i in (1..=p).rev() {
        let g = order[i - 1];
        let mut t3i = pow4(2 * i + n - 1) + pow4(2 * i + n - 2);
        for (j, &src) in edge_source.iter().enumerate() {
            if src == Src::Gate(g) {
                t3i += pow4(j);
            }
        }
        let t3i1 = BigUint::from(3u32) * pow4(2 * i + n - 2);
        let t3i2 = pow4(2 * i + n - 2);
        s.push(t3i);
        s.push(t3i1);
        s.push(t3i2);
    }
    Ok(SubsetsumData { q, r, s, n_outputs: n })
}

/// The canonical greedy algorithm for super-decreasing subsetsum: subtract
/// each s_j that still fits; for super-decreasing s the returned δ with
/// δ·s̄ = target exists iff any solution does (and is then unique).
pub fn greedy_subsetsum(target: &BigUint, s: &[BigUint]) -> Option<Vec<bool>> {
    let mut a = target.clone();
    let mut delta = Vec::with_capacity(s.len());
    for sj in s {
        if &a >= sj {
            a -= sj;
            delta.push(true);
        } else {
            delta.push(false);
        }
    }
    if a.is_zero() {
        Some(delta)
    } else {
        None
    }
}

/// SLP over {0,1} for the subset-sum indicator string S(t̄) of length
/// Σt̄ + 1: position p carries 1 iff p = α·t̄ for some α ∈ {0,1}^k. Built by
/// S(t_1..t_k) = S(t_2..t_k) · 0^{t_1 − (t_2+⋯+t_k) − 1} · S(t_2..t_k) with
/// S(ε) = "1"; SLP size O(k + Σ bit lengths).
pub fn superdecreasing_slp(t: &[BigUint]) -> Result<Slp> {
    let k = t.len();
    // suffix sums: rest[i] = t_{i+2} + ... + t_k for the 1-based t_{i+1}
    let mut rest = vec![BigUint::zero(); k + 1];
    for i in (0..k).rev() {
        rest[i] = &rest[i + 1] + &t[i];
    }
    let mut b = SlpBuilder::new();
    b.start("V0");
    b.rule(&format!("V{k}"), &["1"]);
    for i in (1..=k).rev() {
        // gap for t_i (1-based): t_i − Σ_{j>i} t_j − 1
        let ti = &t[i - 1];
        let tail = &rest[i];
        if ti <= tail {
            return Err(Error::NotSuperDecreasing(i));
        }
        let gap = ti - tail - 1u32;
        let inner = format!("V{i}");
        if gap.is_zero() {
            b.rule(&format!("V{}", i - 1), &[inner.clone(), inner]);
        } else {
            let (rules, head) = power_rules(&format!("Z{i}_"), &["0"], &gap);
            for (h, body) in rules {
                b.rule(&h, &body);
            }
            b.rule(&format!("V{}", i - 1), &[inner.clone(), head, inner]);
        }
    }
    b.build()
}

/// Everything produced by the pipeline, including the bookkeeping constants
/// of the construction.
#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub slp_i: Slp,
    pub slp_j: Slp,
    pub data: SubsetsumData,
    pub ell: BigUint,
    pub pi: BigUint,
    pub d_offset: BigUint,
    pub h: BigUint,
    pub m1: usize,
    pub m2: usize,
    pub generators: Vec<String>,
}

fn sum(v: &[BigUint]) -> BigUint {
    v.iter().sum()
}

/// Assemble the wreath SLPs over {a_0..a_{n-1}, inverses, t, t', 1} from a
/// preprocessed one-hot circuit.
///
/// slp_i derives a shift-free word whose base-group value at position
/// −bin(β)·π is the leaf product λ_β = Π_γ a_{hot(βγ)}; slp_j derives a word
/// that is trivial in G≀ℤ iff every λ_β is central in G.
pub fn build_pipeline(
    c: &DagCircuit,
    m1: usize,
    alphabet: &Arc<GenAlphabet>,
    generators: &[&str],
    trust_one_hot: bool,
) -> Result<PipelineOutput> {
    let m = c.n_inputs;
    let n = c.n_outputs();
    if generators.len() != n {
        return Err(Error::Invalid(format!(
            "need one generator per output: {n} outputs, {} generators",
            generators.len()
        )));
    }
    for g in generators {
        let l = alphabet
            .lookup(g)
            .ok_or_else(|| Error::UnknownLetter((*g).to_owned()))?;
        if *g == SHIFT || *g == SHIFT_INV || l == alphabet.pad() {
            return Err(Error::Invalid(format!(
                "`{g}` is reserved for the wreath shift or padding"
            )));
        }
    }
    if m1 == 0 || m1 >= m {
        return Err(Error::Invalid(format!("m1 must satisfy 1 <= m1 < m = {m}, got {m1}")));
    }
    check_one_hot(c, trust_one_hot)?;

    let data = circuit_to_subsetsum(c)?;
    let (r1, r2) = data.r.split_at(m1);
    let sum_r1 = sum(r1);
    let sum_r2 = sum(r2);
    let sum_s = sum(&data.s);
    let max_q = data.q.iter().max().expect("n >= 1").clone();
    let min_q = data.q.iter().min().expect("n >= 1").clone();
    // ℓ = max of the two support-separation bounds, then raised so that
    // n ≤ π = ℓ + Σr̄₂
    let l1 = BigInt::from(&sum_r1 + &max_q + 1u32);
    let l2 = BigInt::from(sum_s.clone()) - BigInt::from(sum_r2.clone())
        - BigInt::from(min_q) + 1;
    let l3 = BigInt::from(n) - BigInt::from(sum_r2.clone());
    let ell: BigUint = l1.max(l2).max(l3).try_into().expect("l1 >= 1");
    let pi = &ell + &sum_r2;
    let h = &sum_s + 1u32;
    let two_m1 = BigUint::one() << m1;
    let d_offset = &sum_r1 + 1u32 + &two_m1 * &pi;

    // --- the SLP I ---
    let slp_h = superdecreasing_slp(&data.s)?;
    let slp_g1 = superdecreasing_slp(r1)?;
    let slp_g2 = superdecreasing_slp(r2)?;
    let mut b = SlpBuilder::new();
    let mut sigma: Vec<String> = Vec::new();
    for (i, qi) in data.q.iter().enumerate() {
        // H_i: the 0/1 string SLP for s with 0 → τ⁻¹ and 1 → a_i τ⁻¹
        let gen = generators[i].to_owned();
        b.rules(slp_h.rules_substituted(&format!("H{i}_"), |tok| match tok {
            "0" => vec![SHIFT_INV.to_owned()],
            _ => vec![gen.clone(), SHIFT_INV.to_owned()],
        }));
        let t_i = format!("H{i}_{}", slp_h.start_var());
        let (rules, qh) = power_rules(&format!("QP{i}_"), &[SHIFT], qi);
        b.rules(rules);
        if qi > &h {
            return Err(Error::Invalid(format!("target q_{i} exceeds Σs̄ + 1")));
        }
        let (rules, rh) = power_rules(&format!("QS{i}_"), &[SHIFT], &(&h - qi));
        b.rules(rules);
        sigma.extend([qh, t_i, rh]);
    }
    b.rule("SIG", &sigma);
    // G2 with 0 → τ and 1 → σ τ
    b.rules(slp_g2.rules_substituted("G2_", |tok| match tok {
        "0" => vec![SHIFT.to_owned()],
        _ => vec!["SIG".to_owned(), SHIFT.to_owned()],
    }));
    let s2 = format!("G2_{}", slp_g2.start_var());
    let (rules, ellh) = power_rules("ELL_", &[SHIFT], &ell);
    b.rules(rules);
    // G1 with 0 → τ and 1 → S2 τ^ℓ
    b.rules(slp_g1.rules_substituted("G1_", |tok| match tok {
        "0" => vec![SHIFT.to_owned()],
        _ => vec![s2.clone(), ellh.clone()],
    }));
    let (rules, dh) = power_rules("DD_", &[SHIFT_INV], &d_offset);
    b.rules(rules);
    b.rule("S", &[format!("G1_{}", slp_g1.start_var()), dh]);
    b.start("S");
    let slp_i = b.build()?;

    // --- the SLP J ---
    let slp_i_inv = slp_i.invert(alphabet)?;
    let mut b = SlpBuilder::new();
    b.rules(slp_i.rules_prefixed("I_"));
    b.rules(slp_i_inv.rules_prefixed("N_"));
    let (rules, pih) = power_rules("PI_", &[SHIFT], &pi);
    b.rules(rules);
    let (rules, pivh) = power_rules("PIV_", &[SHIFT_INV], &pi);
    b.rules(rules);
    let shift_total = &two_m1 * &pi;
    let (rules, negh) = power_rules("NEG_", &[SHIFT_INV], &shift_total);
    b.rules(rules);
    let (rules, posh) = power_rules("POS_", &[SHIFT], &shift_total);
    b.rules(rules);
    let mut j_body: Vec<String> = Vec::new();
    for (i, gen) in generators.iter().enumerate() {
        let gen_inv = alphabet
            .inv_token(gen)
            .expect("generator validated above")
            .to_owned();
        // w_i = (a_i τ^π)^{2^{m1}} τ^{-2^{m1}π} and its inverse
        let (rules, wh) = power_rules(&format!("W{i}_"), &[(*gen).to_owned(), pih.clone()], &two_m1);
        b.rules(rules);
        b.rule(&format!("W{i}"), &[wh, negh.clone()]);
        let (rules, vh) = power_rules(&format!("V{i}_"), &[pivh.clone(), gen_inv], &two_m1);
        b.rules(rules);
        b.rule(&format!("V{i}"), &[posh.clone(), vh]);
        // J_i derives val(I)⁻¹ w_i⁻¹ val(I) w_i
        b.rule(
            &format!("J{i}"),
            &["N_S".to_owned(), format!("V{i}"), "I_S".to_owned(), format!("W{i}")],
        );
        if i > 0 {
            j_body.push(SHIFT.to_owned());
        }
        j_body.push(format!("J{i}"));
    }
    let (rules, backh) = power_rules("BK_", &[SHIFT_INV], &BigUint::from(n as u32 - 1));
    b.rules(rules);
    j_body.push(backh);
    b.rule("J", &j_body);
    b.start("J");
    let slp_j = b.build()?;

    Ok(PipelineOutput {
        slp_i,
        slp_j,
        data,
        ell,
        pi,
        d_offset,
        h,
        m1,
        m2: m - m1,
        generators: generators.iter().map(|g| (*g).to_owned()).collect(),
    })
}

fn input_bits(value: usize, width: usize) -> Vec<bool> {
    (0..width).rev().map(|k| value >> k & 1 == 1).collect()
}

/// Check the one-hot property exhaustively (m ≤ 20); larger circuits are
/// refused unless explicitly trusted.
pub fn check_one_hot(c: &DagCircuit, trust: bool) -> Result<()> {
    let m = c.n_inputs;
    if m > 20 {
        return if trust {
            Ok(())
        } else {
            Err(Error::Invalid(format!(
                "one-hot check needs m <= 20 (got {m}); pass the trust flag to skip it"
            )))
        };
    }
    for a in 0..1usize << m {
        let bits = input_bits(a, m);
        let outs = dag_eval(c, &bits)?;
        if outs.iter().filter(|&&o| o).count() != 1 {
            let alpha: String = bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
            return Err(Error::NotOneHot(alpha));
        }
    }
    Ok(())
}

/// Ground truth for the pipeline at small scale: for each β ∈ {0,1}^{m1}
/// the word λ_β = Π_{γ lexicographic} a_{hot(βγ)}, indexed by bin(β).
pub fn leafstring_brute(
    c: &DagCircuit,
    m1: usize,
    alphabet: &Arc<GenAlphabet>,
    generators: &[&str],
) -> Result<Vec<GroupWord>> {
    let m = c.n_inputs;
    if m > 20 {
        return Err(Error::Invalid(format!("brute-force needs m <= 20, got {m}")));
    }
    if generators.len() != c.n_outputs() {
        return Err(Error::Invalid("need one generator per output".into()));
    }
    if m1 > m {
        return Err(Error::Invalid(format!("m1 = {m1} exceeds m = {m}")));
    }
    let m2 = m - m1;
    let mut lambdas = Vec::with_capacity(1 << m1);
    for beta in 0..1usize << m1 {
        let mut word = GroupWord::empty(alphabet);
        for gamma in 0..1usize << m2 {
            let mut bits = input_bits(beta, m1);
            bits.extend(input_bits(gamma, m2));
            let outs = dag_eval(c, &bits)?;
            let hot: Vec<usize> = (0..outs.len()).filter(|&i| outs[i]).collect();
            if hot.len() != 1 {
                let alpha: String = bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
                return Err(Error::NotOneHot(alpha));
            }
            word.push_token(generators[hot[0]])?;
        }
        lambdas.push(word);
    }
    Ok(lambdas)
}

/// The result of tiny-scale pipeline verification (valid for base groups
/// with trivial center, where λ_β central means λ_β trivial).
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub j_trivial: bool,
    pub lambdas_trivial: Vec<bool>,
}

/// Cross-check a built pipeline against brute force: the compressed value of
/// slp_i must carry exactly λ_β at every position −bin(β)·π, and slp_j must
/// be trivial iff every λ_β is. Errors on any mismatch.
pub fn verify_pipeline<B: BaseGroup>(
    out: &PipelineOutput,
    c: &DagCircuit,
    base: &B,
    support_limit: usize,
) -> Result<VerifyReport> {
    let alphabet = base.alphabet().clone();
    let generators: Vec<&str> = out.generators.iter().map(|g| g.as_str()).collect();
    let lambdas = leafstring_brute(c, out.m1, &alphabet, &generators)?;

    let eval_i: WreathElement<B::Elem> = wreath_eval_slp(&out.slp_i, base, None, support_limit)?;
    if !eval_i.shift.is_zero() {
        return Err(Error::Invalid(format!(
            "slp_i has nonzero shift {}",
            eval_i.shift
        )));
    }
    let pi = BigInt::from(out.pi.clone());
    let mut lambdas_trivial = Vec::with_capacity(lambdas.len());
    for (beta, lambda) in lambdas.iter().enumerate() {
        let p_beta = -BigInt::from(beta) * &pi;
        let mut expected = base.identity();
        for tok in lambda.tokens() {
            expected = base.mul(&expected, &base.letter_elem(tok)?);
        }
        let matches = match eval_i.support.get(&p_beta) {
            Some(actual) => base.elems_equal(actual, &expected),
            None => base.is_identity(&expected),
        };
        if !matches {
            return Err(Error::Invalid(format!(
                "slp_i value at position {p_beta} differs from the leaf product for beta = {beta}"
            )));
        }
        lambdas_trivial.push(base.is_identity(&expected));
    }
    let eval_j: WreathElement<B::Elem> = wreath_eval_slp(&out.slp_j, base, None, support_limit)?;
    let j_trivial = eval_j.is_trivial();
    if j_trivial != lambdas_trivial.iter().all(|&t| t) {
        return Err(Error::Invalid(
            "slp_j triviality disagrees with the leaf products".into(),
        ));
    }
    Ok(VerifyReport { j_trivial, lambdas_trivial })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation;
    use crate::slp::DEFAULT_EXPAND_LIMIT;
    use crate::wreath::PermBase;
    use std::collections::HashMap;

    fn parse(text: &str) -> DagCircuit {
        DagCircuit::parse(text).unwrap()
    }

    /// A constant one-hot circuit: output 0 always 1, output 1 always 0.
    fn constant_one_hot(m: usize) -> DagCircuit {
        let mut text = format!("circuit\ninputs {m}\n");
        text.push_str("gate hot = nand c0 c0\n");
        text.push_str("gate cold = nand c1 c1\n");
        text.push_str("output 0 hot\noutput 1 cold\n");
        parse(&text)
    }

    #[test]
    fn parse_eval_round_trip() {
        let c = parse(
            "circuit\ninputs 2\ngate g1 = nand x1 x2\ngate g2 = nand g1 c1\noutput 0 g2\n",
        );
        // g2 = not(not(x1 and x2)) = x1 and x2
        assert_eq!(dag_eval(&c, &[true, true]).unwrap(), vec![true]);
        assert_eq!(dag_eval(&c, &[true, false]).unwrap(), vec![false]);
        let c2 = DagCircuit::parse(&c.to_file_string()).unwrap();
        assert_eq!(c, c2);
        assert!(dag_eval(&c, &[true]).is_err());
        assert!(DagCircuit::parse("circuit\ninputs 1\ngate g = nand x2 c0\noutput 0 g\n").is_err());
    }

    #[test]
    fn output_fan_out_zero_enforced() {
        let bad = "circuit\ninputs 1\ngate g1 = nand x1 c1\ngate g2 = nand g1 g1\noutput 0 g1\n";
        assert!(DagCircuit::parse(bad).is_err());
    }

    #[test]
    fn preprocess_examples() {
        let c = parse("circuit\ninputs 0\ngate g = nand c0 c0\noutput 0 g\n");
        assert_eq!(preprocess_inputs(&c), c);

        let c = parse("circuit\ninputs 1\ngate g = nand x1 x1\noutput 0 g\n");
        let pp = preprocess_inputs(&c);
        assert_eq!(pp.gates.len(), c.gates.len() + 2);
        let uses: usize = pp
            .gates
            .iter()
            .flat_map(|&(a, b)| [a, b])
            .filter(|&s| s == Src::Input(1))
            .count();
        assert_eq!(uses, 1);
        // semantics preserved, exhaustively for m <= 3
        for m in 1..=3usize {
            let mut text = format!("circuit\ninputs {m}\ngate g1 = nand x1 x{m}\n");
            text.push_str("gate g2 = nand g1 g1\ngate g3 = nand g2 x1\noutput 0 g3\n");
            let c = parse(&text);
            let pp = preprocess_inputs(&c);
            for a in 0..1usize << m {
                let bits = input_bits(a, m);
                assert_eq!(dag_eval(&c, &bits).unwrap(), dag_eval(&pp, &bits).unwrap());
            }
        }
    }

    #[test]
    fn greedy_examples() {
        let s: Vec<BigUint> = [4u32, 2, 1].iter().map(|&x| BigUint::from(x)).collect();
        assert_eq!(
            greedy_subsetsum(&BigUint::zero(), &s),
            Some(vec![false, false, false])
        );
        assert_eq!(
            greedy_subsetsum(&BigUint::from(5u32), &s),
            Some(vec![true, false, true])
        );
        assert_eq!(greedy_subsetsum(&BigUint::from(8u32), &s), None);
    }

    #[test]
    fn subsetsum_soundness_small() {
        let c = preprocess_inputs(&parse(
            "circuit\ninputs 2\ngate g1 = nand x1 x2\ngate g2 = nand g1 g1\n\
             gate y0 = nand g1 g1\ngate y1 = nand g2 g2\noutput 0 y0\noutput 1 y1\n",
        ));
        let data = circuit_to_subsetsum(&c).unwrap();
        let n = data.n_outputs;
        // r: strictly decreasing powers of 4
        for w in data.r.windows(2) {
            assert!(w[0] > w[1]);
        }
        for r in &data.r {
            let mut x = r.clone();
            while x > BigUint::one() {
                assert!((&x % 4u32).is_zero());
                x /= 4u32;
            }
        }
        // s super-decreasing with margin >= 4^{n-1}
        let margin = BigUint::from(4u32).pow(n as u32 - 1);
        for i in 0..data.s.len() {
            let tail: BigUint = data.s[i + 1..].iter().sum();
            assert!(&data.s[i] - &tail >= margin);
        }
        // C(α)_i = 1 iff q_i + α·r̄ is a subset sum of s
        for a in 0..4usize {
            let bits = input_bits(a, 2);
            let outs = dag_eval(&c, &bits).unwrap();
            for i in 0..n {
                let mut target = data.q[i].clone();
                for (j, &bit) in bits.iter().enumerate() {
                    if bit {
                        target += &data.r[j];
                    }
                }
                assert_eq!(
                    greedy_subsetsum(&target, &data.s).is_some(),
                    outs[i],
                    "input {a:02b}, output {i}"
                );
            }
        }
    }

    #[test]
    fn superdecreasing_slp_examples() {
        let expand = |t: &[u32]| {
            let t: Vec<BigUint> = t.iter().map(|&x| BigUint::from(x)).collect();
            superdecreasing_slp(&t)
                .unwrap()
                .expand(DEFAULT_EXPAND_LIMIT)
                .unwrap()
                .join("")
        };
        assert_eq!(expand(&[]), "1");
        assert_eq!(expand(&[1]), "11");
        assert_eq!(expand(&[4, 1]), "110011");
        let t: Vec<BigUint> = [2u32, 3].iter().map(|&x| BigUint::from(x)).collect();
        assert!(matches!(
            superdecreasing_slp(&t),
            Err(Error::NotSuperDecreasing(1))
        ));
    }

    #[test]
    fn leafstring_examples() {
        let alpha = GenAlphabet::standard(&["a0", "a1"]);
        let c = constant_one_hot(2);
        let l = leafstring_brute(&c, 1, &alpha, &["a0", "a1"]).unwrap();
        assert_eq!(l.len(), 2);
        for w in &l {
            assert_eq!(w.to_string(), "a0 a0");
        }
        // circuit hot on output bin(x_m): λ_β = a0 a1 for every β
        let c = parse(
            "circuit\ninputs 2\ngate y1 = nand x2 x2\ngate g = nand x2 c1\ngate y0 = nand g c1\n\
             output 0 y0\noutput 1 y1\n",
        );
        // g = nand(x2, 1) = !x2, y0 = nand(g, 1) = x2, y1 = !x2: output 1 is
        // hot for γ = 0 and output 0 for γ = 1
        let l = leafstring_brute(&c, 1, &alpha, &["a0", "a1"]).unwrap();
        for w in &l {
            assert_eq!(w.to_string(), "a1 a0");
        }
        let bad = parse(
            "circuit\ninputs 1\ngate y0 = nand x1 x1\ngate y1 = nand c1 c1\n\
             output 0 y0\noutput 1 y1\n",
        );
        assert!(matches!(
            leafstring_brute(&bad, 1, &alpha, &["a0", "a1"]),
            Err(Error::NotOneHot(_))
        ));
    }

    /// A5 base on u = (0 1)(2 3) (order 2) and w = (0 1 2 3 4) (order 5);
    /// `t` stays free for the wreath shift.
    fn uw_base() -> PermBase {
        let alphabet = GenAlphabet::standard(&["u", "w"]);
        let u = Permutation::from_cycles(5, &[&[0, 1], &[2, 3]]);
        let w = Permutation::from_cycles(5, &[&[0, 1, 2, 3, 4]]);
        let mut map = HashMap::new();
        map.insert("u".to_owned(), u.clone());
        map.insert("u'".to_owned(), u.inverse());
        map.insert("w".to_owned(), w.clone());
        map.insert("w'".to_owned(), w.inverse());
        PermBase::new(&alphabet, &map).unwrap()
    }

    #[test]
    fn pipeline_end_to_end_both_directions() {
        let alpha = GenAlphabet::standard(&["u", "w", "t"]);
        let base = uw_base();
        let c = preprocess_inputs(&constant_one_hot(2));
        // output 0 is always hot, so λ_β = gens[0]² for every β:
        // trivial when gens[0] has order 2, nontrivial when it has order 5
        for (gens, expect_trivial) in [(["u", "w"], true), (["w", "u"], false)] {
            let out = build_pipeline(&c, 1, &alpha, &gens, false).unwrap();
            let report = verify_pipeline(&out, &c, &base, 8_000_000).unwrap();
            assert_eq!(report.j_trivial, expect_trivial, "gens {gens:?}");
            assert_eq!(
                report.lambdas_trivial,
                vec![expect_trivial; 1 << out.m1],
                "gens {gens:?}"
            );
        }
    }

    #[test]
    fn pipeline_structure() {
        let alpha = GenAlphabet::standard(&["a0", "a1", "t"]);
        let c = preprocess_inputs(&constant_one_hot(2));
        let out = build_pipeline(&c, 1, &alpha, &["a0", "a1"], false).unwrap();
        // shift balance: η(val) = 0 for both SLPs
        for slp in [&out.slp_i, &out.slp_j] {
            assert_eq!(slp.count(SHIFT), slp.count(SHIFT_INV));
        }
        assert_eq!(out.m2, 1);
        assert_eq!(out.pi, &out.ell + out.data.r[1..].iter().sum::<BigUint>());
        // non-one-hot circuits are rejected with a witness
        let bad = preprocess_inputs(&parse(
            "circuit\ninputs 2\ngate y0 = nand x1 x1\ngate y1 = nand c1 c1\n\
             output 0 y0\noutput 1 y1\n",
        ));
        assert!(matches!(
            build_pipeline(&bad, 1, &alpha, &["a0", "a1"], false),
            Err(Error::NotOneHot(_))
        ));
    }
}
