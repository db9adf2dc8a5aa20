//! Command-line front end for `mf-bridge-core`.
//!
//! Exit codes: 0 on success, 1 when a check or classification fails, 2 on
//! usage, IO or parse errors.

use std::ffi::OsString;
use std::fmt::Display;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use mf_bridge_core::emtt::{self, Node};
use mf_bridge_core::hf;
use mf_bridge_core::k0::{self, K0Derivation, ObligationStatus};
use mf_bridge_core::props::{self, GenConfig, Property};
use mf_bridge_core::rules::{self, Catalog};
use mf_bridge_core::set::{self, Formula, ParseOptions, SetNode};
use mf_bridge_core::sexp::{self, Sexp};
use mf_bridge_core::{hat, tilde, Fresh, Name, TheoryFlavor};

pub const SEED_VAR: &str = "MF_BRIDGE_SEED";

#[derive(Parser, Debug)]
#[command(name = "mf-bridge", version, about = "Translate and check between set theory and emTT")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a file and print it back.
    Parse(InputArgs),
    /// Translate between the two languages.
    Translate(TranslateArgs),
    /// Report whether a set-theoretic formula or term is Δ0 and fits a flavor.
    Classify(ClassifyArgs),
    /// Evaluate a formula or term in a rank-bounded universe.
    Eval(EvalArgs),
    /// Run a seeded property check.
    Check(CheckArgs),
    /// Check a K0 derivation and print its σ-image.
    Sigma(SigmaArgs),
    /// List rule schemas or check a rule instance.
    Rules(RulesArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Lang {
    Set,
    Emtt,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Pretty,
    Sexp,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Flavor {
    Czf,
    Izf,
    Zf,
}

impl From<Flavor> for TheoryFlavor {
    fn from(f: Flavor) -> TheoryFlavor {
        match f {
            Flavor::Czf => TheoryFlavor::Czf,
            Flavor::Izf => TheoryFlavor::Izf,
            Flavor::Zf => TheoryFlavor::Zf,
        }
    }
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Input file (`.fm` set theory, `.mt` emTT, `-` for stdin).
    path: Option<PathBuf>,
    /// Inline source instead of a file.
    #[arg(short = 'e', long = "expr", conflicts_with = "path")]
    expr: Option<String>,
    /// Input language; defaults to the file extension.
    #[arg(long)]
    lang: Option<Lang>,
    /// Read the input as a canonical s-expression.
    #[arg(long = "input-format", value_enum, default_value = "pretty")]
    input_format: Format,
    /// Accept generated `name#k` variables, e.g. when reading back printed output.
    #[arg(long = "allow-reserved")]
    allow_reserved: bool,
    /// Output format.
    #[arg(long, value_enum, default_value = "pretty")]
    format: Format,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Direction {
    #[value(name = "set2emtt")]
    SetToEmtt,
    #[value(name = "emtt2set")]
    EmttToSet,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Eta,
    Delta,
    Hat,
    Context,
}

#[derive(Args, Debug)]
struct TranslateArgs {
    #[arg(long)]
    dir: Direction,
    /// For emtt2set: which translation to apply. Defaults to the sort of the input.
    #[arg(long)]
    mode: Option<Mode>,
    #[command(flatten)]
    input: InputArgs,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[arg(long, value_enum, default_value = "izf")]
    flavor: Flavor,
    #[command(flatten)]
    input: InputArgs,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[arg(long, default_value_t = 3)]
    rank: u8,
    /// Assignment such as `x={}, y={{}}`.
    #[arg(long, default_value = "")]
    env: String,
    #[command(flatten)]
    input: InputArgs,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(long, value_parser = parse_property)]
    property: Property,
    /// Defaults to $MF_BRIDGE_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 3)]
    rank: u8,
    #[arg(long, default_value_t = 3)]
    depth: usize,
    #[arg(long, value_enum, default_value = "izf")]
    flavor: Flavor,
    /// Let generated syntax mention ω.
    #[arg(long)]
    omega: bool,
    /// Comma-separated variable pool.
    #[arg(long, default_value = "x,y,z")]
    pool: String,
}

#[derive(Args, Debug)]
struct SigmaArgs {
    /// Derivation file (s-expression).
    #[arg(long)]
    derivation: PathBuf,
    /// Assumption γ (`.fm`); defaults to ⊤.
    #[arg(long)]
    gamma: Option<PathBuf>,
    /// Formula the derivation must build (`.fm`); defaults to the one it builds.
    #[arg(long)]
    formula: Option<PathBuf>,
    #[arg(long, default_value_t = 3)]
    rank: u8,
    #[arg(long, value_enum, default_value = "pretty")]
    format: Format,
}

#[derive(Args, Debug)]
struct RulesArgs {
    #[arg(long, value_enum, default_value = "zf")]
    flavor: Flavor,
    /// List the schemas of the flavor.
    #[arg(long, conflicts_with_all = ["check", "show"])]
    list: bool,
    /// Check a rule instance file.
    #[arg(long, value_name = "FILE")]
    check: Option<PathBuf>,
    /// Print one schema.
    #[arg(long, value_name = "ID", conflicts_with = "check")]
    show: Option<String>,
}

fn parse_property(s: &str) -> Result<Property, String> {
    Property::parse(s).ok_or_else(|| {
        let names: Vec<&str> = Property::ALL.iter().map(|p| p.as_str()).collect();
        format!("unknown property `{}`; expected one of {}", s, names.join(", "))
    })
}

/// A failure with the exit code it maps to.
struct Failure {
    code: u8,
    msg: String,
}

fn usage(msg: impl Display) -> Failure {
    Failure { code: 2, msg: msg.to_string() }
}

type Res<T> = Result<T, Failure>;

/// Run the tool on `argv` (including the program name).
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", rendered);
                    0
                }
                _ => {
                    let _ = write!(err, "{}", rendered);
                    2
                }
            };
        }
    };
    let mut text = String::new();
    let r = dispatch(cli.cmd, &mut text);
    let _ = out.write_all(text.as_bytes());
    match r {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.msg);
            f.code
        }
    }
}

fn dispatch(cmd: Command, out: &mut String) -> Res<u8> {
    match cmd {
        Command::Parse(a) => cmd_parse(a, out),
        Command::Translate(a) => cmd_translate(a, out),
        Command::Classify(a) => cmd_classify(a, out),
        Command::Eval(a) => cmd_eval(a, out),
        Command::Check(a) => cmd_check(a, out),
        Command::Sigma(a) => cmd_sigma(a, out),
        Command::Rules(a) => cmd_rules(a, out),
    }
}

// ---------------------------------------------------------------- input

fn read_path(p: &Path) -> Res<String> {
    if p.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| usage(format!("stdin: {}", e)))?;
        return Ok(s);
    }
    std::fs::read_to_string(p).map_err(|e| usage(format!("{}: {}", p.display(), e)))
}

enum Parsed {
    Set(SetNode),
    Emtt(Node),
}

fn lang_of(a: &InputArgs) -> Res<Lang> {
    if let Some(l) = a.lang {
        return Ok(l);
    }
    match a.path.as_ref().and_then(|p| p.extension()).and_then(|e| e.to_str()) {
        Some("fm") => Ok(Lang::Set),
        Some("mt") => Ok(Lang::Emtt),
        _ => Err(usage("cannot tell the input language; use a .fm or .mt file or pass --lang")),
    }
}

fn source(a: &InputArgs) -> Res<String> {
    match (&a.expr, &a.path) {
        (Some(e), _) => Ok(e.clone()),
        (None, Some(p)) => read_path(p),
        (None, None) => Err(usage("no input; give a file or --expr")),
    }
}

fn opts(allow_reserved: bool) -> ParseOptions {
    ParseOptions { allow_reserved }
}

fn parse_set(src: &str, format: Format, o: ParseOptions) -> Res<SetNode> {
    match format {
        Format::Pretty => set::parse_node(src, o, &mut Fresh::new()).map_err(usage),
        Format::Sexp => {
            let s = sexp::parse(src).map_err(usage)?;
            SetNode::from_sexp(&s).map_err(usage)
        }
    }
}

fn parse_emtt(src: &str, format: Format, o: ParseOptions) -> Res<Node> {
    match format {
        Format::Pretty => emtt::parse_node(src, o).map_err(usage),
        Format::Sexp => {
            let s = sexp::parse(src).map_err(usage)?;
            Node::from_sexp(&s).map_err(usage)
        }
    }
}

fn read_input(a: &InputArgs) -> Res<Parsed> {
    let lang = lang_of(a)?;
    let src = source(a)?;
    Ok(match lang {
        Lang::Set => Parsed::Set(parse_set(&src, a.input_format, opts(a.allow_reserved))?),
        Lang::Emtt => Parsed::Emtt(parse_emtt(&src, a.input_format, opts(a.allow_reserved))?),
    })
}

fn read_set_formula(p: &Path) -> Res<Formula> {
    match parse_set(&read_path(p)?, Format::Pretty, ParseOptions::default())? {
        SetNode::Formula(f) => Ok(f),
        SetNode::Term(_) => Err(usage(format!("{}: expected a formula, found a term", p.display()))),
    }
}

fn emit(out: &mut String, format: Format, pretty: impl Display, sexp: impl FnOnce() -> Sexp) {
    match format {
        Format::Pretty => out.push_str(&pretty.to_string()),
        Format::Sexp => out.push_str(&sexp().to_string()),
    }
    out.push('\n');
}

// ---------------------------------------------------------------- commands

fn cmd_parse(a: InputArgs, out: &mut String) -> Res<u8> {
    match read_input(&a)? {
        Parsed::Set(n) => emit(out, a.format, &n, || n.to_sexp()),
        Parsed::Emtt(n) => emit(out, a.format, &n, || n.to_sexp()),
    }
    Ok(0)
}

fn cmd_translate(a: TranslateArgs, out: &mut String) -> Res<u8> {
    let fmt = a.input.format;
    match a.dir {
        Direction::SetToEmtt => {
            if a.mode.is_some() {
                return Err(usage("--mode only applies to --dir emtt2set"));
            }
            let lang = a.input.lang.unwrap_or(Lang::Set);
            if lang != Lang::Set || lang_of(&a.input).ok() == Some(Lang::Emtt) {
                return Err(usage("set2emtt expects set-theoretic input"));
            }
            let src = source(&a.input)?;
            let n = tilde::tilde(&parse_set(&src, a.input.input_format, opts(a.input.allow_reserved))?);
            emit(out, fmt, &n, || n.to_sexp());
        }
        Direction::EmttToSet => {
            let lang = a.input.lang.unwrap_or(Lang::Emtt);
            if lang != Lang::Emtt || lang_of(&a.input).ok() == Some(Lang::Set) {
                return Err(usage("emtt2set expects emTT input"));
            }
            let src = source(&a.input)?;
            let f = if a.mode == Some(Mode::Context) {
                let ctx = match a.input.input_format {
                    Format::Pretty => emtt::parse_context(&src, opts(a.input.allow_reserved)).map_err(usage)?,
                    Format::Sexp => return Err(usage("contexts are read in surface syntax only")),
                };
                hat::hat_context(&ctx).map_err(usage)?
            } else {
                let n = parse_emtt(&src, a.input.input_format, opts(a.input.allow_reserved))?;
                let mode = a.mode.unwrap_or(match n {
                    Node::Col(_) => Mode::Eta,
                    Node::Term(_) => Mode::Delta,
                    Node::Prop(_) => Mode::Hat,
                });
                match (mode, n) {
                    (Mode::Eta, Node::Col(c)) => hat::eta(&c),
                    (Mode::Delta, Node::Term(t)) => hat::delta(&t),
                    (Mode::Hat, Node::Prop(p)) => hat::hat(&p),
                    (m, n) => {
                        return Err(usage(format!("--mode {:?} does not apply to `{}`", m, n).to_lowercase()));
                    }
                }
                .map_err(usage)?
            };
            emit(out, fmt, &f, || f.to_sexp());
        }
    }
    Ok(0)
}

fn cmd_classify(a: ClassifyArgs, out: &mut String) -> Res<u8> {
    let Parsed::Set(n) = read_input(&a.input)? else {
        return Err(usage("classify expects set-theoretic input"));
    };
    let flavor = TheoryFlavor::from(a.flavor);
    let d0 = set::is_delta0(&n, flavor);
    out.push_str(&format!("delta0: {}\n", if d0 { "yes" } else { "no" }));
    let fits = match set::flavor_check(&n, flavor) {
        Ok(()) => {
            out.push_str(&format!("{}: ok\n", flavor));
            true
        }
        Err(vs) => {
            out.push_str(&format!("{}: {} violation(s)\n", flavor, vs.len()));
            for v in vs {
                out.push_str(&format!("  {}\n", v));
            }
            false
        }
    };
    Ok(if d0 && fits { 0 } else { 1 })
}

fn cmd_eval(a: EvalArgs, out: &mut String) -> Res<u8> {
    let u = hf::enumerate_universe(a.rank).map_err(usage)?;
    let env = hf::parse_env(&a.env).map_err(usage)?;
    let f = match read_input(&a.input)? {
        Parsed::Set(SetNode::Formula(f)) => f,
        Parsed::Set(SetNode::Term(t)) => {
            let v = hf::eval_term(&t, &env, &u).map_err(usage)?;
            out.push_str(&format!("{}\n", v));
            return Ok(0);
        }
        Parsed::Emtt(n) => hat::translate_node(&n).map_err(usage)?,
    };
    let v = hf::eval_formula(&f, &env, &u).map_err(usage)?;
    out.push_str(if v { "true\n" } else { "false\n" });
    Ok(0)
}

fn seed_from_env() -> Res<u64> {
    match std::env::var(SEED_VAR) {
        Ok(s) => s.trim().parse().map_err(|_| usage(format!("{} is not a number: `{}`", SEED_VAR, s))),
        Err(_) => Ok(0),
    }
}

fn cmd_check(a: CheckArgs, out: &mut String) -> Res<u8> {
    let seed = match a.seed {
        Some(s) => s,
        None => seed_from_env()?,
    };
    let pool: Vec<Name> = a.pool.split(',').map(str::trim).filter(|s| !s.is_empty()).map(Name::new).collect();
    let cfg = GenConfig {
        seed,
        max_depth: a.depth,
        pool,
        rank: a.rank,
        flavor: a.flavor.into(),
        omega_allowed: a.omega,
        sample_count: a.samples,
        deep: false,
    };
    cfg.validate().map_err(usage)?;
    let report = props::run_check(a.property, &cfg).map_err(usage)?;
    out.push_str(&format!("seed: {}\n", seed));
    out.push_str(&report.to_string());
    Ok(if report.passed() { 0 } else { 1 })
}

fn cmd_sigma(a: SigmaArgs, out: &mut String) -> Res<u8> {
    let src = read_path(&a.derivation)?;
    let d = K0Derivation::parse(&src).map_err(|e| usage(format!("{}: {}", a.derivation.display(), e)))?;
    let gamma = match &a.gamma {
        Some(p) => read_set_formula(p)?,
        None => Formula::top(),
    };
    let phi = match &a.formula {
        Some(p) => read_set_formula(p)?,
        None => d.formula(),
    };
    hf::enumerate_universe(a.rank).map_err(usage)?;
    let mut obligations = match k0::k0_reconstruct(&phi, &gamma, &d) {
        Ok(o) => o,
        Err(m) => {
            out.push_str(&format!("derivation mismatch: {}\n", m));
            return Ok(1);
        }
    };
    k0::discharge_all(&mut obligations, a.rank).map_err(usage)?;
    let mut refuted = false;
    for o in &obligations {
        let status = match &o.status {
            ObligationStatus::Unchecked => "unchecked".to_string(),
            ObligationStatus::HfVerified { rank, confirmed, inconclusive } => {
                format!("verified at rank {} ({} confirmed, {} inconclusive)", rank, confirmed, inconclusive)
            }
            ObligationStatus::Refuted { rank, counterexample } => {
                refuted = true;
                format!(
                    "refuted at rank {}: {} has witnesses {} and {}",
                    rank,
                    hf::format_env(&counterexample.env),
                    counterexample.witnesses.0,
                    counterexample.witnesses.1
                )
            }
        };
        out.push_str(&format!("obligation {}: {}\n", o.z, status));
    }
    if refuted {
        return Ok(1);
    }
    let image = k0::sigma(&d, &obligations).map_err(usage)?;
    let d0 = set::is_delta0_formula(&image.formula, TheoryFlavor::Czf);
    match a.format {
        Format::Pretty => out.push_str(&format!("sigma: {}\n", image.formula)),
        Format::Sexp => out.push_str(&format!("sigma: {}\n", image.formula.to_sexp())),
    }
    if !image.leftover.is_empty() {
        let names: Vec<&str> = image.leftover.iter().map(|x| x.as_str()).collect();
        out.push_str(&format!("witness variables: {}\n", names.join(", ")));
    }
    out.push_str(&format!("delta0: {}\n", if d0 { "yes" } else { "no" }));
    let agree = k0::check_sigma_agreement(&d, &gamma, a.rank).map_err(usage)?;
    match &agree.counterexample {
        None => out.push_str(&format!(
            "agreement: ok ({} environments, {} skipped)\n",
            agree.checked, agree.skipped
        )),
        Some((env, l, r)) => out.push_str(&format!(
            "agreement: differs at {} (formula {}, sigma {})\n",
            hf::format_env(env),
            l,
            r
        )),
    }
    Ok(if d0 && agree.holds() { 0 } else { 1 })
}

fn cmd_rules(a: RulesArgs, out: &mut String) -> Res<u8> {
    let cat = Catalog::builtin();
    let flavor = TheoryFlavor::from(a.flavor);
    if let Some(p) = &a.check {
        let inst = rules::parse_instance(&read_path(p)?).map_err(|e| usage(format!("{}: {}", p.display(), e)))?;
        return Ok(match cat.match_instance(flavor, &inst) {
            Ok(()) => {
                out.push_str(&format!("ok: instance of `{}` in emTT_{}\n", inst.schema, flavor));
                0
            }
            Err(e @ rules::MatchError::Mismatch { .. }) => {
                out.push_str(&format!("mismatch: {}\n", e));
                1
            }
            Err(e) => return Err(usage(e)),
        });
    }
    if let Some(id) = &a.show {
        let r = cat.get(id).ok_or_else(|| usage(format!("no rule schema named `{}`", id)))?;
        out.push_str(&r.render());
        out.push('\n');
        return Ok(0);
    }
    let list = cat.list_rules(flavor);
    for r in &list {
        out.push_str(&format!(
            "{:<36} step {}  {}\n",
            r.id,
            r.step,
            if r.derived { "derived" } else { "primitive" }
        ));
    }
    out.push_str(&format!("{} rules in emTT_{}\n", list.len(), flavor));
    Ok(0)
}
