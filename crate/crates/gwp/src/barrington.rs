//! Balanced nand-tree circuits, G-programs and the padded Barrington-style
//! compiler, parameterized by a SENS provider (a family of uniform-length
//! commutator witnesses g_{d,v} with g_{d,ε} ≠ 1).

use crate::error::{Error, Result};
use crate::words::{commutator_word, word_inverse, GenAlphabet, GroupOracle, GroupWord};
use std::sync::Arc;

/// A complete binary tree of nand gates of depth d whose leaf v reads input
/// bit j through query(v) = (j, a, b): the leaf is a if x_j = 1, else b.
/// Queries are indexed by bin(v) (v read as a binary number, first bit most
/// significant).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NandTreeCircuit {
    pub depth: usize,
    pub n_inputs: usize,
    pub query: Vec<(usize, bool, bool)>,
}

impl NandTreeCircuit {
    pub fn new(depth: usize, n_inputs: usize, query: Vec<(usize, bool, bool)>) -> Result<Self> {
        if query.len() != 1 << depth {
            return Err(Error::Invalid(format!(
                "expected {} leaf queries, got {}",
                1usize << depth,
                query.len()
            )));
        }
        if n_inputs == 0 {
            return Err(Error::Invalid("circuit needs at least one input".into()));
        }
        for &(j, _, _) in &query {
            if j == 0 || j > n_inputs {
                return Err(Error::Invalid(format!("leaf reads input {j} of {n_inputs}")));
            }
        }
        Ok(NandTreeCircuit { depth, n_inputs, query })
    }

    /// Parse the nand-tree file format:
    /// `nandtree`, `depth <d>`, `inputs <n>`, 2^d lines `leaf <v> <j> <a> <b>`
    /// (the root vertex at d = 0 is written `e`).
    pub fn parse(text: &str) -> Result<NandTreeCircuit> {
        let toks = crate::words::tokenize(text);
        let mut it = toks.iter().map(|s| s.as_str());
        let mut expect = |what: &str| -> Result<&str> {
            it.next()
                .ok_or_else(|| Error::Parse(format!("unexpected end of file, expected {what}")))
        };
        if expect("`nandtree`")? != "nandtree" {
            return Err(Error::Parse("file must begin with `nandtree`".into()));
        }
        if expect("`depth`")? != "depth" {
            return Err(Error::Parse("expected `depth <d>`".into()));
        }
        let depth: usize = parse_num(expect("depth value")?)?;
        if expect("`inputs`")? != "inputs" {
            return Err(Error::Parse("expected `inputs <n>`".into()));
        }
        let n_inputs: usize = parse_num(expect("inputs value")?)?;
        let mut query = vec![None; 1 << depth];
        for _ in 0..1usize << depth {
            if expect("`leaf`")? != "leaf" {
                return Err(Error::Parse("expected `leaf <v> <j> <a> <b>`".into()));
            }
            let v = expect("leaf vertex")?;
            let idx = vertex_index(v, depth)?;
            let j: usize = parse_num(expect("leaf input index")?)?;
            let a = parse_bit(expect("leaf bit a")?)?;
            let b = parse_bit(expect("leaf bit b")?)?;
            if query[idx].replace((j, a, b)).is_some() {
                return Err(Error::Parse(format!("duplicate leaf `{v}`")));
            }
        }
        if it.next().is_some() {
            return Err(Error::Parse("trailing tokens after last leaf".into()));
        }
        let query = query.into_iter().map(|q| q.expect("all leaves seen")).collect();
        NandTreeCircuit::new(depth, n_inputs, query)
    }

    pub fn to_file_string(&self) -> String {
        let mut out = format!("nandtree\ndepth {}\ninputs {}\n", self.depth, self.n_inputs);
        for (i, &(j, a, b)) in self.query.iter().enumerate() {
            let v = vertex_string(i, self.depth);
            out.push_str(&format!("leaf {v} {j} {} {}\n", a as u8, b as u8));
        }
        out
    }
}

pub fn vertex_index(v: &str, depth: usize) -> Result<usize> {
    if depth == 0 {
        return if v == "e" {
            Ok(0)
        } else {
            Err(Error::Parse(format!("depth-0 vertex must be `e`, got `{v}`")))
        };
    }
    if v.len() != depth || !v.bytes().all(|b| b == b'0' || b == b'1') {
        return Err(Error::Parse(format!("vertex `{v}` is not a 0/1 string of length {depth}")));
    }
    Ok(v.bytes().fold(0usize, |acc, b| acc * 2 + (b - b'0') as usize))
}

pub fn vertex_string(index: usize, depth: usize) -> String {
    if depth == 0 {
        return "e".into();
    }
    (0..depth)
        .rev()
        .map(|k| if index >> k & 1 == 1 { '1' } else { '0' })
        .collect()
}

pub fn index_bits(index: usize, depth: usize) -> Vec<bool> {
    (0..depth).rev().map(|k| index >> k & 1 == 1).collect()
}

fn parse_bit(tok: &str) -> Result<bool> {
    match tok {
        "0" => Ok(false),
        "1" => Ok(true),
        _ => Err(Error::Parse(format!("expected bit 0/1, got `{tok}`"))),
    }
}

/// Parse a decimal number, allowing `_` separators.
pub fn parse_num<T: std::str::FromStr>(tok: &str) -> Result<T> {
    let cleaned: String = tok.chars().filter(|&c| c != '_').collect();
    cleaned
        .parse()
        .map_err(|_| Error::Parse(format!("invalid number `{tok}`")))
}

/// Evaluate the circuit: leaves per query, internal gates nand, root value.
pub fn circuit_eval(c: &NandTreeCircuit, x: &[bool]) -> Result<bool> {
    if x.len() != c.n_inputs {
        return Err(Error::InputLength { expected: c.n_inputs, got: x.len() });
    }
    fn eval(c: &NandTreeCircuit, level: usize, idx: usize, x: &[bool]) -> bool {
        if level == c.depth {
            let (j, a, b) = c.query[idx];
            return if x[j - 1] { a } else { b };
        }
        let v0 = eval(c, level + 1, 2 * idx, x);
        let v1 = eval(c, level + 1, 2 * idx + 1, x);
        !(v0 && v1)
    }
    Ok(eval(c, 0, 0, x))
}

/// One G-program instruction ⟨index, on_one, on_zero⟩, letters stored as
/// alphabet indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Instruction {
    pub index: usize, // 1-based input bit
    pub on_one: u32,
    pub on_zero: u32,
}

#[derive(Debug, Clone)]
pub struct GProgram {
    pub alphabet: Arc<GenAlphabet>,
    pub n_inputs: usize,
    pub instructions: Vec<Instruction>,
}

impl GProgram {
    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    /// Parse the program file format: `gprogram <n>`, then one instruction
    /// per line `<j> <on_one> <on_zero>`.
    pub fn parse(alphabet: &Arc<GenAlphabet>, text: &str) -> Result<GProgram> {
        let toks = crate::words::tokenize(text);
        if toks.len() < 2 || toks[0] != "gprogram" {
            return Err(Error::Parse("file must begin with `gprogram <n>`".into()));
        }
        let n_inputs: usize = parse_num(&toks[1])?;
        let rest = &toks[2..];
        if rest.len() % 3 != 0 {
            return Err(Error::Parse("instructions must be `<j> <on_one> <on_zero>` triples".into()));
        }
        let mut instructions = Vec::with_capacity(rest.len() / 3);
        for ch in rest.chunks(3) {
            let index: usize = parse_num(&ch[0])?;
            if index == 0 || index > n_inputs {
                return Err(Error::Parse(format!("instruction reads input {index} of {n_inputs}")));
            }
            let lookup = |tok: &str| {
                alphabet
                    .lookup(tok)
                    .ok_or_else(|| Error::UnknownLetter(tok.to_owned()))
            };
            instructions.push(Instruction {
                index,
                on_one: lookup(&ch[1])?,
                on_zero: lookup(&ch[2])?,
            });
        }
        Ok(GProgram { alphabet: alphabet.clone(), n_inputs, instructions })
    }

    pub fn to_file_string(&self) -> String {
        let mut out = format!("gprogram {}\n", self.n_inputs);
        for ins in &self.instructions {
            out.push_str(&format!(
                "{} {} {}\n",
                ins.index,
                self.alphabet.token(ins.on_one),
                self.alphabet.token(ins.on_zero)
            ));
        }
        out
    }
}

/// P[x]: the word emitted on input x.
pub fn run_program(p: &GProgram, x: &[bool]) -> Result<GroupWord> {
    if x.len() != p.n_inputs {
        return Err(Error::InputLength { expected: p.n_inputs, got: x.len() });
    }
    let letters = p
        .instructions
        .iter()
        .map(|ins| if x[ins.index - 1] { ins.on_one } else { ins.on_zero })
        .collect();
    Ok(GroupWord::from_indices(&p.alphabet, letters))
}

/// A family of SENS witnesses: leaves of exact uniform length L(d) (a power
/// of 2) whose nested commutators g_{d,ε} are nontrivial.
pub trait SensProvider: Sync {
    fn name(&self) -> &'static str;
    fn alphabet(&self) -> &Arc<GenAlphabet>;
    fn oracle(&self) -> &dyn GroupOracle;
    fn leaf_len(&self, d: usize) -> usize;
    fn leaf(&self, d: usize, v: &[bool]) -> GroupWord;
}

/// g_{d,ε} fully expanded via g_{d,v} = [g_{d,v0}, g_{d,v1}];
/// |result| = L(d)·4^d.
pub fn nested_commutator(provider: &dyn SensProvider, d: usize) -> GroupWord {
    fn build(provider: &dyn SensProvider, d: usize, v: &mut Vec<bool>) -> GroupWord {
        if v.len() == d {
            return provider.leaf(d, v);
        }
        v.push(false);
        let g0 = build(provider, d, v);
        v.pop();
        v.push(true);
        let g1 = build(provider, d, v);
        v.pop();
        commutator_word(&g0, &g1).expect("same alphabet")
    }
    build(provider, d, &mut Vec::new())
}

/// The five padded program families of one tree node.
struct Five {
    p: Vec<Instruction>,
    pinv: Vec<Instruction>,
    g: Vec<Instruction>,
    ginv: Vec<Instruction>,
    one: Vec<Instruction>,
}

/// Compile the circuit into a G-program P_ε with
/// |P_ε| = 8^d · L(d) exactly; P_ε[x] is trivial iff the circuit outputs 0.
pub fn compile_program(c: &NandTreeCircuit, provider: &dyn SensProvider) -> GProgram {
    let alphabet = provider.alphabet().clone();
    let pad = alphabet.pad();
    let d = c.depth;
    let leaf_len = provider.leaf_len(d);
    assert!(leaf_len.is_power_of_two(), "leaf length must be a power of 2");

    let constant = |w: &GroupWord| -> Vec<Instruction> {
        w.letters()
            .iter()
            .map(|&l| Instruction { index: 1, on_one: l, on_zero: l })
            .collect()
    };
    // ⟨j, w^a, w^b⟩ per letter: emit the letter when the branch bit is 1.
    let query_prog = |w: &GroupWord, j: usize, a: bool, b: bool| -> Vec<Instruction> {
        w.letters()
            .iter()
            .map(|&l| Instruction {
                index: j,
                on_one: if a { l } else { pad },
                on_zero: if b { l } else { pad },
            })
            .collect()
    };

    let mut level: Vec<Five> = (0..1usize << d)
        .map(|idx| {
            let v = index_bits(idx, d);
            let g_word = provider.leaf(d, &v);
            debug_assert_eq!(g_word.len(), leaf_len);
            let g_inv_word = word_inverse(&g_word);
            let (j, a, b) = c.query[idx];
            Five {
                p: query_prog(&g_word, j, a, b),
                pinv: query_prog(&g_inv_word, j, a, b),
                g: constant(&g_word),
                ginv: constant(&g_inv_word),
                one: vec![Instruction { index: 1, on_one: pad, on_zero: pad }; leaf_len],
            }
        })
        .collect();

    for _ in 0..d {
        level = level
            .chunks(2)
            .map(|pair| {
                let (u0, u1) = (&pair[0], &pair[1]);
                let cat = |parts: &[&[Instruction]]| -> Vec<Instruction> {
                    parts.iter().flat_map(|p| p.iter().copied()).collect()
                };
                Five {
                    // P_v = g0⁻¹ g1⁻¹ g0 g1 P1⁻¹ P0⁻¹ P1 P0
                    p: cat(&[&u0.ginv, &u1.ginv, &u0.g, &u1.g, &u1.pinv, &u0.pinv, &u1.p, &u0.p]),
                    // P_v⁻¹ = P0⁻¹ P1⁻¹ P0 P1 g1⁻¹ g0⁻¹ g1 g0
                    pinv: cat(&[&u0.pinv, &u1.pinv, &u0.p, &u1.p, &u1.ginv, &u0.ginv, &u1.g, &u0.g]),
                    // g_v = g0⁻¹ g1⁻¹ g0 g1 1⁴
                    g: cat(&[&u0.ginv, &u1.ginv, &u0.g, &u1.g, &u0.one, &u0.one, &u0.one, &u0.one]),
                    // g_v⁻¹ = g1⁻¹ g0⁻¹ g1 g0 1⁴
                    ginv: cat(&[&u1.ginv, &u0.ginv, &u1.g, &u0.g, &u0.one, &u0.one, &u0.one, &u0.one]),
                    // 1_v = 1⁸
                    one: cat(&[&u0.one, &u0.one, &u0.one, &u0.one, &u0.one, &u0.one, &u0.one, &u0.one]),
                }
            })
            .collect();
    }
    let root = level.into_iter().next().expect("root exists");
    GProgram { alphabet, n_inputs: c.n_inputs, instructions: root.p }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::providers::{A5SensProvider, F2SensProvider};

    #[test]
    fn circuit_eval_examples() {
        let c = NandTreeCircuit::new(0, 1, vec![(1, true, false)]).unwrap();
        assert!(circuit_eval(&c, &[true]).unwrap());
        assert!(!circuit_eval(&c, &[false]).unwrap());
        let c = NandTreeCircuit::new(1, 1, vec![(1, true, false), (1, true, false)]).unwrap();
        assert!(!circuit_eval(&c, &[true]).unwrap()); // nand(1,1) = 0
        assert!(circuit_eval(&c, &[false]).unwrap());
        assert!(circuit_eval(&c, &[true, true]).is_err());
    }

    #[test]
    fn circuit_file_round_trip() {
        let text = "nandtree\ndepth 1\ninputs 2\nleaf 0 1 1 0\nleaf 1 2 0 1\n";
        let c = NandTreeCircuit::parse(text).unwrap();
        assert_eq!(c.query, vec![(1, true, false), (2, false, true)]);
        let c2 = NandTreeCircuit::parse(&c.to_file_string()).unwrap();
        assert_eq!(c, c2);
        let d0 = "nandtree depth 0 inputs 1 leaf e 1 1 0";
        assert!(NandTreeCircuit::parse(d0).is_ok());
    }

    #[test]
    fn run_program_examples() {
        let alpha = crate::perm::a5_alphabet();
        let p = GProgram { alphabet: alpha.clone(), n_inputs: 1, instructions: vec![] };
        assert!(run_program(&p, &[true]).unwrap().is_empty());
        let p = GProgram::parse(&alpha, "gprogram 1\n1 s 1\n").unwrap();
        assert_eq!(run_program(&p, &[false]).unwrap().to_string(), "1");
        assert_eq!(run_program(&p, &[true]).unwrap().to_string(), "s");
        assert!(run_program(&p, &[]).is_err());
    }

    #[test]
    fn program_file_round_trip() {
        let alpha = crate::perm::a5_alphabet();
        let p = GProgram::parse(&alpha, "gprogram 2\n1 s 1\n2 t' t\n").unwrap();
        let p2 = GProgram::parse(&alpha, &p.to_file_string()).unwrap();
        assert_eq!(p.instructions, p2.instructions);
        assert!(GProgram::parse(&alpha, "gprogram 1\n1 qq 1\n").is_err());
    }

    #[test]
    fn nested_commutator_lengths() {
        let prov = F2SensProvider::new();
        for d in 0..=3 {
            let g = nested_commutator(&prov, d);
            assert_eq!(g.len(), prov.leaf_len(d) << (2 * d));
        }
    }

    #[test]
    fn compile_length_and_correctness_small() {
        let prov = A5SensProvider::new();
        // d = 0: the program is the leaf instruction sequence.
        let c = NandTreeCircuit::new(0, 1, vec![(1, true, false)]).unwrap();
        let p = compile_program(&c, &prov);
        assert_eq!(p.len(), prov.leaf_len(0));
        for d in 0..=2 {
            let leaves = 1usize << d;
            let query: Vec<(usize, bool, bool)> =
                (0..leaves).map(|i| (i % 2 + 1, i % 3 != 0, i % 2 == 0)).collect();
            let c = NandTreeCircuit::new(d, 2, query).unwrap();
            let p = compile_program(&c, &prov);
            assert_eq!(p.len(), prov.leaf_len(d) << (3 * d));
            for xi in 0..4usize {
                let x = [xi & 2 != 0, xi & 1 != 0];
                let word = run_program(&p, &x).unwrap();
                assert_eq!(
                    prov.oracle().is_trivial(&word),
                    !circuit_eval(&c, &x).unwrap(),
                );
            }
        }
    }

    #[test]
    fn constant_programs_have_equal_branches() {
        let prov = A5SensProvider::new();
        let c = NandTreeCircuit::new(1, 1, vec![(1, true, false), (1, false, true)]).unwrap();
        let p = compile_program(&c, &prov);
        // the first half of this program is built from constants
        for ins in &p.instructions[..p.len() / 2] {
            assert_eq!(ins.on_one, ins.on_zero);
            assert_eq!(ins.index, 1);
        }
    }
}
