use clap::{Args, Parser, Subcommand};
use goodsemi::apery::{apery_set_with_margin, cap_stable, level_function, partition_levels};
use goodsemi::branch::{h_from_sequence, is_plane_sequence, semigroup_from_sequence, sequence_from_semigroup};
use goodsemi::hn::{hn_expand, hn_to_param, multiplicity_sequence, splitting_data, synth_branch, synth_curve};
use goodsemi::json::*;
use goodsemi::semigroup::verify_good;
use goodsemi::transfer::{blow_down_semigroup, blow_up_semigroup};
use goodsemi::tree::{build_tree, read_tree, semigroup_from_tree, semigroup_tree, validate_tree};
use goodsemi::valuation::{blow_up_param, value_semigroup, value_semigroup_auto, CurveParam};
use goodsemi::{Error, LevelPartition};
use serde_json::{json, Value};
use std::io::Read;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "goodsemi", version, about = "Good semigroups, Apéry levels, blow-ups and multiplicity trees of plane curves")]
struct Cli {
    /// Extra truncation margin for Apéry sets (cap = c + ω + N).
    #[arg(long, global = true, default_value_t = 0)]
    cap: u32,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Semigroup checks.
    #[command(subcommand)]
    Good(GoodCmd),
    /// Apéry set of S with respect to ω, split into levels.
    Apery(OmegaInput),
    /// Level of one point of S.
    Levels {
        #[command(flatten)]
        input: OmegaInput,
        /// Comma-separated point.
        #[arg(long)]
        point: String,
    },
    /// Blow-up of a local semigroup.
    Blowup { file: String },
    /// The local semigroup with multiplicity ω blowing up to S.
    Blowdown(OmegaInput),
    /// Plane branches given by multiplicity sequences.
    #[command(subcommand)]
    Branch(BranchCmd),
    /// Hamburger-Noether expansions.
    #[command(subcommand)]
    Hn(HnCmd),
    /// Multiplicity trees.
    #[command(subcommand)]
    Tree(TreeCmd),
    /// Parametrized curves.
    #[command(subcommand)]
    Curve(CurveCmd),
    /// Text renderings.
    #[command(subcommand)]
    Render(RenderCmd),
}

#[derive(Args)]
struct OmegaInput {
    /// Comma-separated ω.
    #[arg(long)]
    omega: String,
    /// Semigroup JSON file, or - for stdin.
    file: String,
}

#[derive(Subcommand)]
enum GoodCmd {
    /// Check the good-semigroup axioms on {"conductor", "smalls"}.
    Check { file: String },
}

#[derive(Subcommand)]
enum BranchCmd {
    /// Proximity check and restriction numbers.
    Check { sequence: String },
    /// Semigroup of a branch with the given multiplicity sequence.
    Seq2sg { sequence: String },
    /// Multiplicity sequence of a plane numerical semigroup.
    Sg2seq { file: String },
    /// H-type of a multiplicity sequence.
    H { sequence: String },
}

#[derive(Subcommand)]
enum HnCmd {
    /// Expansion of a branch {"x": series, "y": series}.
    Expand { file: String },
    /// Generic branch with the given multiplicity sequence.
    Synth {
        sequence: String,
        /// Also emit the parametrization.
        #[arg(long)]
        param: bool,
    },
    /// Splitting data of two expansions.
    Split { first: String, second: String },
}

#[derive(Subcommand)]
enum TreeCmd {
    /// Tree from {"sequences": [...], "k": [[...]]}.
    Build { file: String },
    /// Sequences and splitting numbers of a tree.
    Read { file: String },
    /// Check that a tree is the multiplicity tree of a plane curve.
    Validate { file: String },
    /// Graphviz rendering.
    Dot { file: String },
    /// Tree of a semigroup.
    FromSg { file: String },
    /// Semigroup of a tree.
    ToSg { file: String },
}

#[derive(Subcommand)]
enum CurveCmd {
    /// Value semigroup of a curve.
    Semigroup {
        file: String,
        /// Comma-separated search box; doubled automatically when omitted.
        #[arg(long)]
        bound: Option<String>,
    },
    /// Branchwise (x, y/x).
    Blowup { file: String },
    /// Curve with prescribed sequences and splitting numbers.
    Synth { file: String },
}

#[derive(Subcommand)]
enum RenderCmd {
    /// Grid of level indices for a 2-dimensional level partition.
    Grid { file: String },
}

enum Out {
    Json(Value),
    Text(String),
    /// Report printed on stdout, exit status 1 when not ok.
    Report(Value, bool),
}

fn read_input(path: &str) -> Result<String, Error> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Parse(e.to_string()))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))
    }
}

fn read_json(path: &str) -> Result<Value, Error> {
    serde_json::from_str(&read_input(path)?).map_err(|e| Error::Parse(format!("{path}: {e}")))
}

fn parse_list(s: &str) -> Result<Vec<u32>, Error> {
    s.trim()
        .trim_start_matches('[')
        .trim_end_matches(']')
        .split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|x| x.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad integer list \"{s}\""))))
        .collect()
}

/// A literal list, or a file holding a sequence JSON.
fn sequence_arg(s: &str) -> Result<goodsemi::branch::PlaneSequence, Error> {
    match parse_list(s) {
        Ok(v) if !v.is_empty() => goodsemi::branch::PlaneSequence::new(&v),
        _ => sequence_from_json(&read_json(s)?),
    }
}

fn precision() -> usize {
    std::env::var("GOODSEMI_PRECISION").ok().and_then(|v| v.parse().ok()).unwrap_or(64)
}

fn grid_text(p: &LevelPartition) -> Result<String, Error> {
    if p.cap.len() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: p.cap.len() });
    }
    let (cx, cy) = (p.cap[0], p.cap[1]);
    let width = (p.n().saturating_sub(1)).to_string().len().max(cx.to_string().len()) + 1;
    let label = |v: u32, c: u32| if v == c { "∞".to_string() } else { v.to_string() };
    let ylab = cy.to_string().len().max(1);
    let mut out = String::new();
    for y in (0..=cy).rev() {
        out.push_str(&format!("{:>ylab$} |", label(y, cy)));
        for x in 0..=cx {
            let cell = p.level_of(&[x, y]).map_or(".".to_string(), |l| l.to_string());
            out.push_str(&format!("{cell:>width$}"));
        }
        out.push('\n');
    }
    out.push_str(&format!("{:>ylab$} +{}\n", "", "-".repeat(width * (cx as usize + 1))));
    out.push_str(&format!("{:>ylab$}  ", ""));
    for x in 0..=cx {
        out.push_str(&format!("{:>width$}", label(x, cx)));
    }
    out.push('\n');
    Ok(out)
}

fn run(cli: Cli) -> Result<Out, Error> {
    let margin = cli.cap;
    Ok(match cli.cmd {
        Cmd::Good(GoodCmd::Check { file }) => {
            let v = read_json(&file)?;
            let c = uints(v.get("conductor").ok_or_else(|| Error::Parse("missing field \"conductor\"".into()))?)?;
            let smalls = v
                .get("smalls")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse("missing field \"smalls\"".into()))?
                .iter()
                .map(uints)
                .collect::<Result<Vec<_>, _>>()?;
            let r = verify_good(&smalls, &c)?;
            let violations: Vec<Value> = r
                .violations
                .iter()
                .map(|v| json!({"axiom": v.axiom, "witness": v.witness.iter().map(|p| p.coords().to_vec()).collect::<Vec<_>>()}))
                .collect();
            Out::Report(json!({"ok": r.ok, "violations": violations, "minimal_conductor": r.minimal_conductor}), r.ok)
        }
        Cmd::Apery(OmegaInput { omega, file }) => {
            let s = semigroup_from_json(&read_json(&file)?)?;
            let a = apery_set_with_margin(&s, &parse_list(&omega)?, margin)?;
            let p = partition_levels(&a);
            // "inf" only when each capped coordinate really stands for a ray in one level.
            if cap_stable(&s, &p)? {
                Out::Json(levels_to_json(&p))
            } else {
                eprintln!("warning: levels change beyond the cap {:?}; printing raw capped coordinates", p.cap);
                Out::Json(levels_to_json_raw(&p))
            }
        }
        Cmd::Levels { input, point } => {
            let s = semigroup_from_json(&read_json(&input.file)?)?;
            let p = partition_levels(&apery_set_with_margin(&s, &parse_list(&input.omega)?, margin)?);
            let alpha = parse_list(&point)?;
            Out::Json(json!({"point": alpha, "level": level_function(&s, &p, &alpha)?}))
        }
        Cmd::Blowup { file } => {
            let (b, e) = blow_up_semigroup(&semigroup_from_json(&read_json(&file)?)?)?;
            Out::Json(json!({"multiplicity": e, "semigroup": semigroup_to_json(&b)}))
        }
        Cmd::Blowdown(OmegaInput { omega, file }) => {
            let s = semigroup_from_json(&read_json(&file)?)?;
            Out::Json(semigroup_to_json(&blow_down_semigroup(&s, &parse_list(&omega)?)?))
        }
        Cmd::Branch(b) => match b {
            BranchCmd::Check { sequence } => {
                let r = is_plane_sequence(&parse_list(&sequence)?);
                Out::Report(
                    json!({"ok": r.ok, "reason": r.reason, "restriction_numbers": r.restriction_numbers, "satellite": r.satellite}),
                    r.ok,
                )
            }
            BranchCmd::Seq2sg { sequence } => Out::Json(semigroup_to_json(&semigroup_from_sequence(&sequence_arg(&sequence)?)?)),
            BranchCmd::Sg2seq { file } => {
                Out::Json(sequence_to_json(&sequence_from_semigroup(&semigroup_from_json(&read_json(&file)?)?)?))
            }
            BranchCmd::H { sequence } => Out::Json(htype_to_json(&h_from_sequence(&sequence_arg(&sequence)?))),
        },
        Cmd::Hn(h) => match h {
            HnCmd::Expand { file } => {
                let e = hn_expand(&branch_from_json(&read_json(&file)?)?)?;
                Out::Json(json!({"expansion": hn_to_json(&e), "sequence": multiplicity_sequence(&e).prefix()}))
            }
            HnCmd::Synth { sequence, param } => {
                let e = synth_branch(&sequence_arg(&sequence)?);
                let mut v = json!({"expansion": hn_to_json(&e)});
                if param {
                    v["param"] = branch_to_json(&hn_to_param(&e, precision()));
                }
                Out::Json(v)
            }
            HnCmd::Split { first, second } => {
                let load = |f: &str| -> Result<goodsemi::hn::HNExpansion, Error> {
                    let v = read_json(f)?;
                    match v.get("rows") {
                        Some(_) => hn_from_json(&v),
                        None => match v.get("expansion") {
                            Some(e) => hn_from_json(e),
                            None => hn_expand(&branch_from_json(&v)?),
                        },
                    }
                };
                let s = splitting_data(&load(&first)?, &load(&second)?)?;
                Out::Json(json!({"s": s.s, "t": s.t, "k": s.k, "intersection": s.intersection}))
            }
        },
        Cmd::Tree(t) => match t {
            TreeCmd::Build { file } => Out::Json(tree_to_json(&build_tree(&splitting_from_json(&read_json(&file)?)?)?)),
            TreeCmd::Read { file } => Out::Json(splitting_to_json(&read_tree(&tree_from_json(&read_json(&file)?)?)?)),
            TreeCmd::Validate { file } => {
                let r = validate_tree(&tree_from_json(&read_json(&file)?)?);
                Out::Report(json!({"ok": r.ok, "failed_condition": r.failed_condition, "detail": r.detail}), r.ok)
            }
            TreeCmd::Dot { file } => Out::Text(tree_from_json(&read_json(&file)?)?.to_dot()),
            TreeCmd::FromSg { file } => Out::Json(tree_to_json(&semigroup_tree(&semigroup_from_json(&read_json(&file)?)?)?)),
            TreeCmd::ToSg { file } => Out::Json(semigroup_to_json(&semigroup_from_tree(&tree_from_json(&read_json(&file)?)?)?)),
        },
        Cmd::Curve(c) => match c {
            CurveCmd::Semigroup { file, bound } => {
                let curve = curve_from_json(&read_json(&file)?)?;
                let s = match bound {
                    Some(b) => value_semigroup(&curve, &parse_list(&b)?)?,
                    None => value_semigroup_auto(&curve)?,
                };
                Out::Json(semigroup_to_json(&s))
            }
            CurveCmd::Blowup { file } => Out::Json(curve_to_json(&blow_up_param(&curve_from_json(&read_json(&file)?)?)?)),
            CurveCmd::Synth { file } => {
                let d = splitting_from_json(&read_json(&file)?)?;
                Out::Json(curve_to_json(&CurveParam { branches: synth_curve(&d.e, &d.k, precision())? }))
            }
        },
        Cmd::Render(RenderCmd::Grid { file }) => Out::Text(grid_text(&levels_from_json(&read_json(&file)?)?)?),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Out::Json(v)) => {
            println!("{v}");
            ExitCode::SUCCESS
        }
        Ok(Out::Text(t)) => {
            print!("{t}");
            ExitCode::SUCCESS
        }
        Ok(Out::Report(v, ok)) => {
            println!("{v}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("{}", error_to_json(&e));
            ExitCode::from(1)
        }
    }
}
