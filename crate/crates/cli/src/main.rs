//! `wtower`: command-line front end for the tree calculus.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};
use thiserror::Error;

use wtower::eta::{self, MilnorOutcome};
use wtower::forest::{parse_forest, parse_tree, Convention, DecoratedTree, IntersectionForest};
use wtower::groups::{build_group, obstruction_is_zero, Flavor, GroupSpec};
use wtower::lie::{lyndon_words, standard_bracket, format_bracket, word_multiplicity};
use wtower::rewrite::{collapse, find_vertex, monoize_forest};

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] wtower::Error),
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn tag(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.tag(),
            CliError::Io { .. } => "io",
            CliError::Usage(_) => "usage",
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if !e.is_parse() => 1,
            _ => 2,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "wtower", version, about = "Tree groups, eta maps and Milnor invariants for twisted Whitney towers")]
struct Cli {
    /// Emit a JSON object instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    /// Orientation reading used by the eta maps.
    #[arg(long, global = true, value_enum, default_value_t = Conv::Standard)]
    convention: Conv,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Conv {
    Standard,
    Mirror,
}

impl From<Conv> for Convention {
    fn from(c: Conv) -> Self {
        match c {
            Conv::Standard => Convention::Standard,
            Conv::Mirror => Convention::Mirror,
        }
    }
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum FlavorArg {
    Framed,
    Twisted,
}

impl From<FlavorArg> for Flavor {
    fn from(f: FlavorArg) -> Self {
        match f {
            FlavorArg::Framed => Flavor::Framed,
            FlavorArg::Twisted => Flavor::Twisted,
        }
    }
}

#[derive(Args, Debug)]
struct GroupArgs {
    #[arg(long)]
    m: u32,
    #[arg(long)]
    order: usize,
    #[arg(long, value_enum, default_value_t = FlavorArg::Twisted)]
    flavor: FlavorArg,
    /// Multiplicity bound for the k-repeating groups.
    #[arg(long)]
    k: Option<usize>,
}

impl GroupArgs {
    fn spec(&self) -> GroupSpec {
        GroupSpec::new(self.m, self.order, self.flavor.into(), self.k)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a forest and print it in canonical form.
    Normalize {
        #[arg(long)]
        m: u32,
        #[arg(allow_hyphen_values = true)]
        forest: String,
    },
    /// Invariant factors of a tree group.
    Group(GroupArgs),
    /// Decide whether a forest vanishes in a tree group.
    Obstruct {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(allow_hyphen_values = true)]
        forest: String,
    },
    /// The summation map of a forest.
    Eta {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        order: usize,
        #[arg(long)]
        k: Option<usize>,
        #[arg(allow_hyphen_values = true)]
        forest: String,
    },
    /// First nonvanishing Milnor invariant, from longitudes or from a forest.
    Milnor {
        #[arg(long, conflicts_with_all = ["forest", "m", "order"])]
        longitudes: Option<PathBuf>,
        #[arg(long)]
        k: Option<usize>,
        /// Highest Magnus degree examined.
        #[arg(long, default_value_t = 8)]
        cap: usize,
        #[arg(long, requires = "order")]
        m: Option<u32>,
        #[arg(long, requires = "m")]
        order: Option<usize>,
        #[arg(allow_hyphen_values = true)]
        forest: Option<String>,
    },
    /// Lyndon basis of the degree-d part of the free Lie algebra.
    Lie {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        degree: usize,
        /// Keep basis words of multiplicity at most k.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Arf classes (with --j) or the kernel of eta on the twisted group (with --order).
    Arf {
        #[arg(long)]
        m: u32,
        #[arg(long, conflicts_with = "order", required_unless_present = "order")]
        j: Option<usize>,
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Collapse one univalent edge of a single tree.
    Collapse {
        #[arg(long)]
        m: u32,
        /// Leaf position, left to right from 0.
        #[arg(long, conflicts_with = "label", required_unless_present = "label")]
        vertex: Option<usize>,
        /// Collapse the leftmost leaf carrying this label.
        #[arg(long)]
        label: Option<u32>,
        #[arg(long)]
        strict_collapse: bool,
        /// A tree, optionally preceded by a coefficient as in `+2*<(1,2),3>`.
        #[arg(allow_hyphen_values = true)]
        term: String,
    },
    /// Collapse off-label edges until every tree is mono-labeled.
    Monoize {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        strict_collapse: bool,
        #[arg(allow_hyphen_values = true)]
        forest: String,
    },
}

struct Report {
    text: String,
    json: Value,
}

fn forest_json(f: &IntersectionForest) -> Value {
    Value::Array(
        f.terms()
            .map(|(t, c)| {
                let s = t.stats(f.m());
                json!({
                    "tree": t.to_string(),
                    "coefficient": c.to_string(),
                    "kind": t.kind(),
                    "order": s.order,
                    "multiplicity": s.r_max,
                })
            })
            .collect(),
    )
}

fn strings<T: ToString>(v: &[T]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn parse_term(text: &str, m: u32) -> Result<(BigInt, DecoratedTree)> {
    let (coeff, tree) = match text.split_once('*') {
        Some((c, t)) => {
            let c = c.trim();
            let c = c.strip_prefix('+').unwrap_or(c);
            let v: BigInt = c
                .parse()
                .map_err(|_| wtower::Error::Syntax { pos: 0, msg: format!("bad coefficient '{c}'") })?;
            (v, t)
        }
        None => (BigInt::from(1), text),
    };
    let t = parse_tree(tree.trim())?;
    t.validate_labels(m)?;
    Ok((coeff, t))
}

fn run(cli: &Cli) -> Result<Report> {
    let conv: Convention = cli.convention.into();
    Ok(match &cli.command {
        Command::Normalize { m, forest } => {
            let f = parse_forest(forest, *m)?;
            Report { text: format!("{f}\n"), json: json!({ "forest": f.to_string(), "terms": forest_json(&f) }) }
        }
        Command::Group(args) => {
            let g = build_group(args.spec())?;
            let inv = g.invariants();
            Report {
                text: format!("{inv}\n"),
                json: json!({
                    "spec": args.spec(),
                    "invariants": inv.to_string(),
                    "rank": inv.rank,
                    "torsion": strings(&inv.torsion),
                    "generators": g.generators().len(),
                    "relations": g.relations().len(),
                }),
            }
        }
        Command::Obstruct { group, forest } => {
            let f = parse_forest(forest, group.m)?;
            let o = obstruction_is_zero(&f, group.spec())?;
            let coords: Vec<String> = o
                .element
                .coords
                .iter()
                .zip(&o.element.moduli)
                .map(|(c, d)| if d == &BigInt::from(0) { c.to_string() } else { format!("{c} mod {d}") })
                .collect();
            let text = if o.zero { "ZERO\n".to_string() } else { format!("NONZERO; coordinates ({})\n", coords.join(", ")) };
            Report {
                text,
                json: json!({
                    "zero": o.zero,
                    "coordinates": strings(&o.element.coords),
                    "moduli": strings(&o.element.moduli),
                }),
            }
        }
        Command::Eta { m, order, k, forest } => {
            let f = parse_forest(forest, *m)?;
            let v = match k {
                Some(k) => eta::eta_k_with(&f, *order, *k, conv)?,
                None => eta::eta_with(&f, *order, conv)?,
            };
            Report { text: format!("{v}\n"), json: json!({ "order": order, "value": v.to_string(), "zero": v.is_zero() }) }
        }
        Command::Milnor { longitudes: Some(path), k, cap, .. } => {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.clone(), source })?;
            let l = eta::parse_longitudes(&text)?;
            match eta::milnor_from_longitudes(&l, *k, *cap)? {
                MilnorOutcome::Found(v) => Report {
                    text: format!("order {}; {}\n", v.order, v.format_table()),
                    json: json!({
                        "order": v.order,
                        "value": v.value.to_string(),
                        "table": v.table.iter().map(|(w, c)| json!({ "index": w, "coefficient": c.to_string() })).collect::<Vec<_>>(),
                    }),
                },
                MilnorOutcome::AllVanishing(cap) => Report {
                    text: format!("all vanishing through degree {cap}\n"),
                    json: json!({ "all_vanishing": cap }),
                },
            }
        }
        Command::Milnor { longitudes: None, k, m, order, forest, .. } => {
            let (Some(m), Some(order), Some(forest)) = (m, order, forest) else {
                return Err(CliError::Usage("milnor needs --longitudes FILE, or --m, --order and a forest".into()));
            };
            let f = parse_forest(forest, *m)?;
            let v = eta::milnor_from_forest(&f, *order, *k, conv)?;
            Report { text: format!("order {order}; {v}\n"), json: json!({ "order": order, "value": v.to_string() }) }
        }
        Command::Lie { m, degree, k } => {
            let words: Vec<_> =
                lyndon_words(*m, *degree).into_iter().filter(|w| k.map_or(true, |k| word_multiplicity(w) <= k)).collect();
            let brackets: Vec<String> = words.iter().map(|w| format_bracket(&standard_bracket(w))).collect();
            Report {
                text: brackets.iter().map(|b| format!("{b}\n")).collect(),
                json: json!({ "degree": degree, "rank": brackets.len(), "basis": brackets }),
            }
        }
        Command::Arf { m, j: Some(j), k, .. } => {
            let classes = eta::arf_classes(*m, *j, *k)?;
            Report {
                text: classes.iter().map(|c| format!("{} -> {}\n", c.bracket, c.representative)).collect(),
                json: json!({ "j": j, "order": 4 * j - 2, "classes": classes }),
            }
        }
        Command::Arf { m, j: None, order, k } => {
            let n = order.expect("clap requires --j or --order");
            let e = eta::eta_kernel(*m, n, *k, conv)?;
            let mut text = format!("group: {}\ntarget rank: {}\nkernel: {}\ncokernel: {}\n", e.group, e.target_rank, e.kernel, e.cokernel);
            for g in &e.generators {
                text.push_str(&format!("generator: {} (order {})\n", g.forest, g.order));
            }
            Report {
                text,
                json: json!({
                    "group": e.group.to_string(),
                    "target_rank": e.target_rank,
                    "kernel": e.kernel.to_string(),
                    "cokernel": e.cokernel.to_string(),
                    "generators": e.generators.iter().map(|g| json!({ "forest": g.forest.to_string(), "order": g.order.to_string() })).collect::<Vec<_>>(),
                }),
            }
        }
        Command::Collapse { m, vertex, label, strict_collapse, term } => {
            let (c, t) = parse_term(term, *m)?;
            let v = match (vertex, label) {
                (Some(v), _) => *v,
                (None, Some(l)) => find_vertex(&t, *l)?,
                (None, None) => unreachable!("clap requires --vertex or --label"),
            };
            let step = collapse(&t, v, &c, *strict_collapse)?;
            let merged = step.forest(*m)?;
            Report {
                text: format!("{step}\nresult: {merged}\n"),
                json: json!({
                    "step": step.to_string(),
                    "case": step.case,
                    "label": step.label,
                    "result": merged.to_string(),
                }),
            }
        }
        Command::Monoize { m, k, strict_collapse, forest } => {
            let f = parse_forest(forest, *m)?;
            let r = monoize_forest(&f, *k, *strict_collapse)?;
            Report {
                text: format!("{}result: {}\n", r.trace_text(), r.forest),
                json: json!({
                    "trace": r.trace.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                    "result": r.forest.to_string(),
                    "terms": forest_json(&r.forest),
                }),
            }
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(r) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&r.json).expect("json"));
            } else {
                print!("{}", r.text);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            if cli.json {
                println!("{}", json!({ "error": e.tag(), "message": e.to_string() }));
            }
            eprintln!("error[{}]: {e}", e.tag());
            ExitCode::from(e.exit_code())
        }
    }
}
