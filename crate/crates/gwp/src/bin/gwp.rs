//! Command-line front end: word problems, compressed word problems,
//! SLP queries, the circuit→program compiler, nested-commutator witnesses,
//! and the circuit→subsetsum→wreath-SLP reduction pipeline.
//!
//! Exit codes: 0 = trivial / success, 1 = nontrivial / disagreement,
//! 2 = error.

use std::collections::HashMap;
use std::fs;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use num_bigint::BigUint;
use num_traits::One;

use gwp::barrington::{
    circuit_eval, compile_program, nested_commutator, parse_num, run_program, GProgram,
    NandTreeCircuit,
};
use gwp::grigorchuk::GrigOracle;
use gwp::perm::{a5_oracle, Permutation};
use gwp::providers::{provider_by_name, PROVIDER_NAMES};
use gwp::reduction::{
    build_pipeline, preprocess_inputs, DagCircuit, PipelineOutput, SubsetsumData, VerifyReport,
};
use gwp::slp::{slp_substitute, Slp, DEFAULT_EXPAND_LIMIT};
use gwp::thompson::{thompson_alphabet, thompson_generator, ThompsonOracle};
use gwp::words::{GenAlphabet, GroupOracle, GroupWord};
use gwp::wreath::{
    phi_n_slps, wreath_eval_slp, wreath_is_trivial, FreeBase, GrigBase, PermBase, PlBase,
    DEFAULT_SUPPORT_LIMIT,
};
use gwp::{Error, Result};

#[derive(Parser)]
#[command(name = "gwp", version, about = "Word problems of non-solvable groups")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide whether the word in FILE is trivial in the chosen group.
    Wp {
        /// Group: grigorchuk | thompson | a5 | f2 | f3 | wreath:X[@mod=t]
        #[arg(long)]
        group: String,
        /// File with a whitespace-separated word (# starts a comment)
        word_file: PathBuf,
        /// Emit a machine-readable JSON summary
        #[arg(long)]
        json: bool,
    },
    /// Decide whether val(SLP in FILE) is trivial in the chosen group.
    Cwp {
        #[arg(long)]
        group: String,
        slp_file: PathBuf,
        #[arg(long)]
        json: bool,
        /// Expansion guard for non-wreath groups (default 100_000_000;
        /// the GWP_EXPAND_LIMIT environment variable also overrides it)
        #[arg(long)]
        limit: Option<String>,
        /// Support-size cap for the compressed wreath evaluator
        #[arg(long)]
        support_limit: Option<String>,
    },
    /// Straight-line program queries.
    Slp {
        #[command(subcommand)]
        cmd: SlpCmd,
    },
    /// Compile nand-tree circuits to group programs and evaluate them.
    Barrington {
        #[command(subcommand)]
        cmd: BarCmd,
    },
    /// Print a nested-commutator witness word g_{d,v}.
    Sens {
        /// Provider: a5 | f2 | f3 | grigorchuk | thompson
        #[arg(long)]
        group: String,
        #[arg(long)]
        depth: String,
        /// Bit string naming a leaf v (length = depth); prints the leaf
        /// word instead of the fully expanded commutator
        #[arg(long)]
        leaf: Option<String>,
    },
    /// Reduce a one-hot circuit to wreath-product SLPs I and J.
    Cwpreduce {
        /// DAG circuit file
        circuit_file: PathBuf,
        /// Block split: the first m1 inputs select the leaf string
        #[arg(long)]
        m1: String,
        /// Wreath group supplying the base generators (wreath:X)
        #[arg(long)]
        group: String,
        /// Where to write the SLP J
        #[arg(long)]
        out_j: PathBuf,
        /// Optionally write the SLP I
        #[arg(long)]
        out_i: Option<PathBuf>,
        /// Optionally write the subsetsum numbers
        #[arg(long)]
        out_data: Option<PathBuf>,
        /// Comma-separated base letters to use as a_0..a_{n-1}
        /// (default: the first n positive letters of the base group)
        #[arg(long)]
        generators: Option<String>,
        /// Skip the exhaustive one-hot check (required when inputs > 20)
        #[arg(long)]
        trust_one_hot: bool,
        /// Cross-check I and J against brute force before writing
        #[arg(long)]
        verify: bool,
        /// Post-compose with the iterated embedding: FILE,P,N where FILE
        /// maps every base letter and t,t' to a word over the base letters
        #[arg(long)]
        embed: Option<String>,
        #[arg(long)]
        support_limit: Option<String>,
    },
}

#[derive(Subcommand)]
enum SlpCmd {
    /// Print val(SLP) as a token sequence.
    Expand {
        slp_file: PathBuf,
        #[arg(long)]
        limit: Option<String>,
    },
    /// Print |val(SLP)|.
    Length { slp_file: PathBuf },
    /// Print the letter val(SLP)[pos] (0-based).
    At { slp_file: PathBuf, pos: String },
    /// Print the number of occurrences of LETTER in val(SLP).
    Count { slp_file: PathBuf, letter: String },
    /// Print an SLP for the group-theoretic inverse word.
    Invert {
        slp_file: PathBuf,
        /// Group whose alphabet supplies letter inverses
        #[arg(long)]
        group: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum BarCmd {
    /// Compile a nand-tree circuit file to a group program.
    Compile {
        circuit_file: PathBuf,
        /// Provider: a5 | f2 | f3 | grigorchuk | thompson
        #[arg(long)]
        provider: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a program on an input bit string and decide triviality.
    Run {
        program_file: PathBuf,
        #[arg(long)]
        provider: String,
        /// Input bits, e.g. 1011
        #[arg(long)]
        input: String,
    },
    /// Compile and sweep all inputs, comparing program vs. circuit.
    Check {
        circuit_file: PathBuf,
        #[arg(long)]
        provider: String,
        #[arg(long)]
        json: bool,
    },
}

// ---------------------------------------------------------------------------
// Group registry
// ---------------------------------------------------------------------------

enum BaseHandle {
    Perm(PermBase),
    Free(FreeBase),
    Pl(PlBase),
    Grig(GrigBase),
}

struct WreathGroup {
    /// Alphabet for input words/SLPs: base letters plus t, t'.
    full_alphabet: Arc<GenAlphabet>,
    /// Alphabet of the base group alone (no shift letters).
    base_alphabet: Arc<GenAlphabet>,
    base: BaseHandle,
    modulus: Option<BigUint>,
}

impl WreathGroup {
    fn word_trivial(&self, w: &GroupWord) -> Result<bool> {
        match &self.base {
            BaseHandle::Perm(b) => wreath_is_trivial(w, b, self.modulus.clone()),
            BaseHandle::Free(b) => wreath_is_trivial(w, b, self.modulus.clone()),
            BaseHandle::Pl(b) => wreath_is_trivial(w, b, self.modulus.clone()),
            BaseHandle::Grig(b) => wreath_is_trivial(w, b, self.modulus.clone()),
        }
    }

    fn slp_trivial(&self, g: &Slp, support_limit: usize) -> Result<bool> {
        match &self.base {
            BaseHandle::Perm(b) => {
                Ok(wreath_eval_slp(g, b, self.modulus.clone(), support_limit)?.is_trivial())
            }
            BaseHandle::Free(b) => {
                Ok(wreath_eval_slp(g, b, self.modulus.clone(), support_limit)?.is_trivial())
            }
            BaseHandle::Pl(b) => {
                Ok(wreath_eval_slp(g, b, self.modulus.clone(), support_limit)?.is_trivial())
            }
            BaseHandle::Grig(b) => {
                Ok(wreath_eval_slp(g, b, self.modulus.clone(), support_limit)?.is_trivial())
            }
        }
    }

    fn verify(
        &self,
        out: &PipelineOutput,
        c: &DagCircuit,
        support_limit: usize,
    ) -> Result<VerifyReport> {
        match &self.base {
            BaseHandle::Perm(b) => gwp::reduction::verify_pipeline(out, c, b, support_limit),
            BaseHandle::Free(b) => gwp::reduction::verify_pipeline(out, c, b, support_limit),
            BaseHandle::Pl(b) => gwp::reduction::verify_pipeline(out, c, b, support_limit),
            BaseHandle::Grig(b) => gwp::reduction::verify_pipeline(out, c, b, support_limit),
        }
    }
}

enum Group {
    Plain {
        alphabet: Arc<GenAlphabet>,
        oracle: Box<dyn GroupOracle>,
    },
    Wreath(WreathGroup),
}

impl Group {
    fn alphabet(&self) -> &Arc<GenAlphabet> {
        match self {
            Group::Plain { alphabet, .. } => alphabet,
            Group::Wreath(w) => &w.full_alphabet,
        }
    }
}

fn wreath_a5_base() -> Result<PermBase> {
    let alphabet = GenAlphabet::standard(&["a", "b"]);
    let a = Permutation::from_cycles(5, &[&[0, 1, 2, 3, 4]]);
    let b = Permutation::from_cycles(5, &[&[0, 1, 2]]);
    let mut map = HashMap::new();
    map.insert("a".to_owned(), a.clone());
    map.insert("a'".to_owned(), a.inverse());
    map.insert("b".to_owned(), b.clone());
    map.insert("b'".to_owned(), b.inverse());
    PermBase::new(&alphabet, &map)
}

fn parse_group(name: &str) -> Result<Group> {
    let (name, modulus) = match name.split_once("@mod=") {
        Some((n, m)) => {
            let t: BigUint = parse_num(m)?;
            if t < BigUint::one() {
                return Err(Error::Invalid("modulus must be at least 1".into()));
            }
            (n, Some(t))
        }
        None => (name, None),
    };
    if modulus.is_some() && !name.starts_with("wreath:") {
        return Err(Error::Invalid(format!(
            "@mod= applies only to wreath groups, not `{name}`"
        )));
    }
    let plain = |alphabet: Arc<GenAlphabet>, oracle: Box<dyn GroupOracle>| {
        Ok(Group::Plain { alphabet, oracle })
    };
    match name {
        "grigorchuk" => {
            let o = GrigOracle::new();
            plain(o.alphabet().clone(), Box::new(o))
        }
        "thompson" => {
            let o = ThompsonOracle::new();
            plain(o.alphabet().clone(), Box::new(o))
        }
        "a5" => {
            let o = a5_oracle();
            plain(o.alphabet().clone(), Box::new(o))
        }
        "f2" => {
            let a = GenAlphabet::standard(&["x0", "x1"]);
            plain(a.clone(), Box::new(gwp::words::FreeOracle::new(a)))
        }
        "f3" => {
            let a = GenAlphabet::standard(&["x0", "x1", "x2"]);
            plain(a.clone(), Box::new(gwp::words::FreeOracle::new(a)))
        }
        "wreath:a5" => {
            let base = wreath_a5_base()?;
            Ok(Group::Wreath(WreathGroup {
                full_alphabet: GenAlphabet::standard(&["a", "b", "t"]),
                base_alphabet: GenAlphabet::standard(&["a", "b"]),
                base: BaseHandle::Perm(base),
                modulus,
            }))
        }
        "wreath:f2" => {
            let base_alphabet = GenAlphabet::standard(&["x0", "x1"]);
            Ok(Group::Wreath(WreathGroup {
                full_alphabet: GenAlphabet::standard(&["x0", "x1", "t"]),
                base_alphabet: base_alphabet.clone(),
                base: BaseHandle::Free(FreeBase::new(base_alphabet)),
                modulus,
            }))
        }
        "wreath:grigorchuk" => {
            let full = GenAlphabet::from_pairs(&[
                ("a", "a"),
                ("b", "b"),
                ("c", "c"),
                ("d", "d"),
                ("t", "t'"),
            ]);
            let base = GrigBase::new();
            let base_alphabet = gwp::wreath::BaseGroup::alphabet(&base).clone();
            Ok(Group::Wreath(WreathGroup {
                full_alphabet: full,
                base_alphabet,
                base: BaseHandle::Grig(base),
                modulus,
            }))
        }
        "wreath:thompson" => {
            let base_alphabet = thompson_alphabet();
            let mut map = HashMap::new();
            map.insert("x0".to_owned(), thompson_generator(0));
            map.insert("x1".to_owned(), thompson_generator(1));
            let base = PlBase::new(&base_alphabet, &map)?;
            Ok(Group::Wreath(WreathGroup {
                full_alphabet: GenAlphabet::standard(&["x0", "x1", "t"]),
                base_alphabet,
                base: BaseHandle::Pl(base),
                modulus,
            }))
        }
        _ => Err(Error::Invalid(format!(
            "unknown group `{name}` (try grigorchuk, thompson, a5, f2, f3, \
             wreath:a5, wreath:f2, wreath:grigorchuk, wreath:thompson)"
        ))),
    }
}

// ---------------------------------------------------------------------------
// Helpers
// ---------------------------------------------------------------------------

fn read(path: &PathBuf) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))
}

fn write_out(path: &PathBuf, text: &str) -> Result<()> {
    fs::write(path, text)
        .map_err(|e| Error::Invalid(format!("cannot write {}: {e}", path.display())))
}

fn expand_limit(flag: Option<&str>) -> Result<u64> {
    if let Some(f) = flag {
        return parse_num(f);
    }
    match std::env::var("GWP_EXPAND_LIMIT") {
        Ok(v) => parse_num(&v),
        Err(_) => Ok(DEFAULT_EXPAND_LIMIT),
    }
}

fn support_limit_of(flag: Option<&str>) -> Result<usize> {
    match flag {
        Some(f) => parse_num(f),
        None => Ok(DEFAULT_SUPPORT_LIMIT),
    }
}

fn bits_of(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(Error::Invalid(format!("bit string may only contain 0/1, got `{c}`"))),
        })
        .collect()
}

fn print_word(w: &GroupWord) {
    let toks: Vec<&str> = w.tokens().collect();
    println!("{}", toks.join(" "));
}

fn verdict(trivial: bool, json: bool, extra: serde_json::Value) -> i32 {
    if json {
        let mut obj = extra;
        obj["trivial"] = serde_json::Value::Bool(trivial);
        println!("{obj}");
    } else {
        println!("{}", if trivial { "TRIVIAL" } else { "NONTRIVIAL" });
    }
    if trivial {
        0
    } else {
        1
    }
}

fn subsetsum_to_string(d: &SubsetsumData) -> String {
    let fmt = |v: &[BigUint]| {
        v.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    format!(
        "subsetsum\noutputs {}\nq {}\nr {}\ns {}\n",
        d.n_outputs,
        fmt(&d.q),
        fmt(&d.r),
        fmt(&d.s)
    )
}

/// True when some input is read by anything other than exactly one gate
/// source (the shape the subsetsum numbering needs).
fn needs_preprocess(c: &DagCircuit) -> bool {
    let m = c.n_inputs;
    if m == 0 {
        return false;
    }
    let mut consumers: Vec<Vec<usize>> = vec![Vec::new(); m + 1];
    for (g, (l, r)) in c.gates.iter().enumerate() {
        for src in [l, r] {
            if let gwp::reduction::Src::Input(i) = src {
                consumers[*i].push(g);
            }
        }
    }
    let mut seen = std::collections::HashSet::new();
    for i in 1..=m {
        if consumers[i].len() != 1 || !seen.insert(consumers[i][0]) {
            return true;
        }
    }
    false
}

/// Positive letters of an alphabet in declaration order: one representative
/// per inverse pair (self-inverse letters stand alone), pad excluded.
fn positive_letters(alphabet: &Arc<GenAlphabet>) -> Vec<String> {
    let mut out = Vec::new();
    for l in 0..alphabet.len() as u32 {
        if l == alphabet.pad() {
            continue;
        }
        if alphabet.inv(l) >= l {
            out.push(alphabet.token(l).to_owned());
        }
    }
    out
}

/// Morphism file: lines `<letter> -> <letter> ...`, `#` starts a comment.
fn parse_morphism(text: &str) -> Result<HashMap<String, Vec<String>>> {
    let mut map = HashMap::new();
    for line in text.lines() {
        let line = match line.find('#') {
            Some(i) => &line[..i],
            None => line,
        };
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        if toks.len() < 2 || toks[1] != "->" {
            return Err(Error::Parse(format!(
                "expected `<letter> -> ...`, got `{}`",
                line.trim()
            )));
        }
        if map
            .insert(toks[0].to_owned(), toks[2..].iter().map(|s| s.to_string()).collect())
            .is_some()
        {
            return Err(Error::Parse(format!("duplicate image for `{}`", toks[0])));
        }
    }
    Ok(map)
}

// ---------------------------------------------------------------------------
// Subcommand bodies
// ---------------------------------------------------------------------------

fn cmd_wp(group: &str, word_file: &PathBuf, json: bool) -> Result<i32> {
    let g = parse_group(group)?;
    let w = GroupWord::parse(g.alphabet(), &read(word_file)?)?;
    let trivial = match &g {
        Group::Plain { oracle, .. } => oracle.is_trivial(&w),
        Group::Wreath(wg) => wg.word_trivial(&w)?,
    };
    Ok(verdict(
        trivial,
        json,
        serde_json::json!({"group": group, "length": w.len()}),
    ))
}

fn cmd_cwp(
    group: &str,
    slp_file: &PathBuf,
    json: bool,
    limit: Option<&str>,
    support_limit: Option<&str>,
) -> Result<i32> {
    let g = parse_group(group)?;
    let slp = Slp::parse(&read(slp_file)?)?;
    let trivial = match &g {
        Group::Plain { alphabet, oracle } => {
            let w = slp.expand_word(alphabet, expand_limit(limit)?)?;
            oracle.is_trivial(&w)
        }
        Group::Wreath(wg) => wg.slp_trivial(&slp, support_limit_of(support_limit)?)?,
    };
    Ok(verdict(
        trivial,
        json,
        serde_json::json!({
            "group": group,
            "slp_size": slp.size(),
            "length": slp.length().to_string(),
        }),
    ))
}

fn cmd_slp(cmd: &SlpCmd) -> Result<i32> {
    match cmd {
        SlpCmd::Expand { slp_file, limit } => {
            let slp = Slp::parse(&read(slp_file)?)?;
            let toks = slp.expand(expand_limit(limit.as_deref())?)?;
            println!("{}", toks.join(" "));
        }
        SlpCmd::Length { slp_file } => {
            let slp = Slp::parse(&read(slp_file)?)?;
            println!("{}", slp.length());
        }
        SlpCmd::At { slp_file, pos } => {
            let slp = Slp::parse(&read(slp_file)?)?;
            let p: BigUint = parse_num(pos)?;
            println!("{}", slp.at(&p)?);
        }
        SlpCmd::Count { slp_file, letter } => {
            let slp = Slp::parse(&read(slp_file)?)?;
            println!("{}", slp.count(letter));
        }
        SlpCmd::Invert { slp_file, group, out } => {
            let g = parse_group(group)?;
            let slp = Slp::parse(&read(slp_file)?)?;
            let inv = slp.invert(g.alphabet())?;
            match out {
                Some(p) => write_out(p, &inv.to_file_string())?,
                None => print!("{}", inv.to_file_string()),
            }
        }
    }
    Ok(0)
}

fn cmd_barrington(cmd: &BarCmd) -> Result<i32> {
    match cmd {
        BarCmd::Compile { circuit_file, provider, out } => {
            let prov = provider_by_name(provider).ok_or_else(|| {
                Error::Invalid(format!(
                    "unknown provider `{provider}` (one of {})",
                    PROVIDER_NAMES.join(", ")
                ))
            })?;
            let c = NandTreeCircuit::parse(&read(circuit_file)?)?;
            let p = compile_program(&c, prov.as_ref());
            match out {
                Some(path) => write_out(path, &p.to_file_string())?,
                None => print!("{}", p.to_file_string()),
            }
            Ok(0)
        }
        BarCmd::Run { program_file, provider, input } => {
            let prov = provider_by_name(provider).ok_or_else(|| {
                Error::Invalid(format!("unknown provider `{provider}`"))
            })?;
            let p = GProgram::parse(prov.alphabet(), &read(program_file)?)?;
            let x = bits_of(input)?;
            let w = run_program(&p, &x)?;
            print_word(&w);
            let trivial = prov.oracle().is_trivial(&w);
            println!("{}", if trivial { "TRIVIAL" } else { "NONTRIVIAL" });
            Ok(if trivial { 0 } else { 1 })
        }
        BarCmd::Check { circuit_file, provider, json } => {
            let prov = provider_by_name(provider).ok_or_else(|| {
                Error::Invalid(format!("unknown provider `{provider}`"))
            })?;
            let c = NandTreeCircuit::parse(&read(circuit_file)?)?;
            if c.n_inputs > 20 {
                return Err(Error::Invalid(format!(
                    "check sweeps all 2^n inputs and needs n <= 20, got {}",
                    c.n_inputs
                )));
            }
            let p = compile_program(&c, prov.as_ref());
            let mut mismatches: Vec<String> = Vec::new();
            for a in 0..1u64 << c.n_inputs {
                let x: Vec<bool> = (0..c.n_inputs).map(|i| a >> (c.n_inputs - 1 - i) & 1 == 1).collect();
                let gate = circuit_eval(&c, &x)?;
                let w = run_program(&p, &x)?;
                // program value is trivial exactly when the circuit outputs 0
                if prov.oracle().is_trivial(&w) != !gate {
                    mismatches.push(x.iter().map(|&b| if b { '1' } else { '0' }).collect());
                }
            }
            let agree = mismatches.is_empty();
            if *json {
                println!(
                    "{}",
                    serde_json::json!({
                        "provider": provider,
                        "depth": c.depth,
                        "inputs": 1u64 << c.n_inputs,
                        "program_length": p.len(),
                        "agree": agree,
                        "mismatches": mismatches,
                    })
                );
            } else {
                println!("program length {}", p.len());
                if agree {
                    println!("OK: all {} inputs agree", 1u64 << c.n_inputs);
                } else {
                    for m in &mismatches {
                        println!("MISMATCH at input {m}");
                    }
                }
            }
            Ok(if agree { 0 } else { 1 })
        }
    }
}

fn cmd_sens(group: &str, depth: &str, leaf: Option<&str>) -> Result<i32> {
    let prov = provider_by_name(group).ok_or_else(|| {
        Error::Invalid(format!(
            "unknown provider `{group}` (one of {})",
            PROVIDER_NAMES.join(", ")
        ))
    })?;
    let d: usize = parse_num(depth)?;
    match leaf {
        Some(v) => {
            let bits = bits_of(v)?;
            if bits.len() != d {
                return Err(Error::Invalid(format!(
                    "leaf must have exactly {d} bits, got {}",
                    bits.len()
                )));
            }
            print_word(&prov.leaf(d, &bits));
        }
        None => {
            if d > 10 {
                return Err(Error::Invalid(format!(
                    "the expanded commutator has length 4^d * L(d); depth {d} > 10 refused"
                )));
            }
            print_word(&nested_commutator(prov.as_ref(), d));
        }
    }
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_cwpreduce(
    circuit_file: &PathBuf,
    m1: &str,
    group: &str,
    out_j: &PathBuf,
    out_i: Option<&PathBuf>,
    out_data: Option<&PathBuf>,
    generators: Option<&str>,
    trust_one_hot: bool,
    verify: bool,
    embed: Option<&str>,
    support_limit: Option<&str>,
) -> Result<i32> {
    let g = parse_group(group)?;
    let wg = match &g {
        Group::Wreath(wg) => wg,
        Group::Plain { .. } => {
            return Err(Error::Invalid(format!(
                "cwpreduce targets a wreath group, `{group}` is not one"
            )))
        }
    };
    if wg.modulus.is_some() {
        return Err(Error::Invalid(
            "cwpreduce builds SLPs over the integer wreath product; drop @mod=".into(),
        ));
    }
    let m1: usize = parse_num(m1)?;
    let parsed = DagCircuit::parse(&read(circuit_file)?)?;
    let c = if needs_preprocess(&parsed) {
        println!("preprocessing: giving every input a unique reading gate");
        preprocess_inputs(&parsed)
    } else {
        parsed
    };
    let n = c.n_outputs();
    let gens: Vec<String> = match generators {
        Some(s) => s.split(',').map(|x| x.trim().to_owned()).collect(),
        None => {
            let pos = positive_letters(&wg.base_alphabet);
            if pos.len() < n {
                return Err(Error::Invalid(format!(
                    "base group has {} positive letters but the circuit has {n} outputs",
                    pos.len()
                )));
            }
            pos[..n].to_vec()
        }
    };
    let gen_refs: Vec<&str> = gens.iter().map(|s| s.as_str()).collect();
    let out = build_pipeline(&c, m1, &wg.full_alphabet, &gen_refs, trust_one_hot)?;
    println!("generators {}", gens.join(" "));
    println!("ell {}", out.ell);
    println!("pi {}", out.pi);
    println!("h {}", out.h);
    println!("d {}", out.d_offset);
    println!("size_i {}", out.slp_i.size());
    println!("size_j {}", out.slp_j.size());
    if verify {
        let rep = wg.verify(&out, &c, support_limit_of(support_limit)?)?;
        let lam: Vec<String> = rep
            .lambdas_trivial
            .iter()
            .map(|&b| if b { "1".into() } else { "0".into() })
            .collect();
        println!(
            "verify OK: J {}; lambdas trivial [{}]",
            if rep.j_trivial { "trivial" } else { "nontrivial" },
            lam.join(" ")
        );
    }
    if let Some(p) = out_i {
        write_out(p, &out.slp_i.to_file_string())?;
    }
    if let Some(p) = out_data {
        write_out(p, &subsetsum_to_string(&out.data))?;
    }
    let j_final = match embed {
        Some(spec) => {
            let parts: Vec<&str> = spec.split(',').collect();
            if parts.len() != 3 {
                return Err(Error::Invalid(
                    "--embed expects FILE,P,N (morphism file, torsion order, iterations)".into(),
                ));
            }
            let phi1 = parse_morphism(&read(&PathBuf::from(parts[0]))?)?;
            let p: BigUint = parse_num(parts[1])?;
            if p < BigUint::from(2u32) {
                return Err(Error::Invalid("embedding order P must be at least 2".into()));
            }
            let iters: usize = parse_num(parts[2])?;
            if iters == 0 {
                return Err(Error::Invalid("embedding iteration count N must be >= 1".into()));
            }
            let images = phi_n_slps(&wg.base_alphabet, &phi1, iters)?;
            let embedded = slp_substitute(&out.slp_j, &images)?;
            println!("size_j_embedded {}", embedded.size());
            embedded
        }
        None => out.slp_j.clone(),
    };
    write_out(out_j, &j_final.to_file_string())?;
    Ok(0)
}

fn run(cli: &Cli) -> Result<i32> {
    match &cli.cmd {
        Cmd::Wp { group, word_file, json } => cmd_wp(group, word_file, *json),
        Cmd::Cwp { group, slp_file, json, limit, support_limit } => cmd_cwp(
            group,
            slp_file,
            *json,
            limit.as_deref(),
            support_limit.as_deref(),
        ),
        Cmd::Slp { cmd } => cmd_slp(cmd),
        Cmd::Barrington { cmd } => cmd_barrington(cmd),
        Cmd::Sens { group, depth, leaf } => cmd_sens(group, depth, leaf.as_deref()),
        Cmd::Cwpreduce {
            circuit_file,
            m1,
            group,
            out_j,
            out_i,
            out_data,
            generators,
            trust_one_hot,
            verify,
            embed,
            support_limit,
        } => cmd_cwpreduce(
            circuit_file,
            m1,
            group,
            out_j,
            out_i.as_ref(),
            out_data.as_ref(),
            generators.as_deref(),
            *trust_one_hot,
            *verify,
            embed.as_deref(),
            support_limit.as_deref(),
        ),
    }
}

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}
