//! Command-line interface to the `mealy-orbits` library.
//!
//! Exit codes: 0 success or true, 1 a boolean query answered false, 2 parse
//! or usage error, 3 a cap was exceeded or the verdict is unknown.

use std::fmt::Write as _;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use mealy_orbits::analysis::{
    certify_nontrivial, level_orbits, orbit_tree, spherical_failure_level, transitivity_level, TransitivityVerdict,
};
use mealy_orbits::canonical::canonical_relabeling;
use mealy_orbits::catalog;
use mealy_orbits::md::MdOperation;
use mealy_orbits::orbitaut::{decompose, orbit_automaton, orbit_context, tau};
use mealy_orbits::serialize::{
    automaton_dot, decomposition_dot, decomposition_json, from_json, orbit_automaton_json, orbit_tree_dot,
    orbit_tree_json, petal_dot, petal_json, to_json_value,
};
use mealy_orbits::symmetry::{petal_diagram, symmetry_class};
use mealy_orbits::{
    canonical_form, enumerate_group, is_minimal, md_reduce, minimize, parse_wreath, to_text, Error, FinitenessVerdict,
    Group, GroupWord, MealyAutomaton, OrderVerdict,
};

#[derive(Parser, Debug)]
#[command(
    name = "mealy-orbits",
    version,
    about = "Mealy automata, their groups, orbit trees and orbit automata"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Options,
}

#[derive(clap::Args, Debug)]
struct Options {
    /// Read the automaton from FILE (wreath recursion or JSON); `-` reads stdin.
    #[arg(long = "in", value_name = "FILE", global = true)]
    input: Option<PathBuf>,
    /// The automaton as an inline wreath recursion, e.g. "x=(y,y); y=(x,x)(1,2)".
    #[arg(long, value_name = "RECURSION", global = true)]
    rec: Option<String>,
    /// A built-in automaton: b3 (Bellaterra), b, c.
    #[arg(long, value_name = "NAME", global = true)]
    named: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Tree depth, level, or (for decompose) the transitivity cap.
    #[arg(long, global = true)]
    depth: Option<usize>,
    /// Element, order or transitivity cap.
    #[arg(long, global = true)]
    cap: Option<usize>,
    /// A group element, e.g. "q*w^-1".
    #[arg(long, value_name = "WORD", global = true)]
    element: Option<String>,
    /// A second group element (for `equal`).
    #[arg(long, value_name = "WORD", global = true)]
    other: Option<String>,
    /// A tree vertex as a word over the letters.
    #[arg(long, value_name = "WORD", global = true)]
    vertex: Option<String>,
    /// Orbit representative: over the letters (orbit-automaton, tau) or the
    /// states (certify).
    #[arg(long = "orbit-rep", value_name = "WORD", global = true)]
    orbit_rep: Option<String>,
    /// Start state (for `run`).
    #[arg(long, value_name = "NAME", global = true)]
    state: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the automaton.
    Show,
    /// Invertibility, reversibility, bireversibility and minimality.
    Props,
    /// The inverse automaton.
    Inverse,
    /// The dual automaton.
    Dual,
    /// The minimal automaton.
    Minimize,
    /// Canonical form under state relabeling.
    Canon,
    /// Run `--state` on the letter word `--vertex`.
    Run,
    /// Alternate minimization and dualization to a fixpoint.
    MdReduce,
    /// Image of `--vertex` under `--element`.
    Act,
    /// Section of `--element` at `--vertex`.
    Section,
    /// Whether `--element` is the identity.
    IsTrivial,
    /// Whether `--element` and `--other` are equal.
    Equal,
    /// Order of `--element`, up to `--cap`.
    Order,
    /// Enumerate the generated group, up to `--cap` elements.
    Enumerate,
    /// Orbits on level `--depth`.
    Orbits,
    /// Labeled orbit tree down to `--depth`.
    OrbitTree,
    /// Maximum transitivity level, checked up to `--cap` levels.
    Tlevel,
    /// Whether binary `--element` acts transitively on every level.
    SphTransitive,
    /// Orbit automaton of the orbit of `--orbit-rep`.
    OrbitAutomaton,
    /// Image of `--element` (fixing `--vertex`) in the orbit automaton of `--orbit-rep`.
    Tau,
    /// Iterated orbit-automaton decomposition.
    Decompose,
    /// Certify that orbital-tree words of `--orbit-rep` up to `--depth` are nontrivial.
    Certify,
    /// The symmetry class of the automaton.
    SymClass,
    /// The petal map on the symmetry class of the automaton.
    Petals,
}

/// Result of a successful run, mapped to the exit code.
enum Outcome {
    True,
    False,
    Unknown,
}

impl Outcome {
    fn from_bool(b: bool) -> Self {
        if b {
            Self::True
        } else {
            Self::False
        }
    }

    fn code(&self) -> u8 {
        match self {
            Self::True => 0,
            Self::False => 1,
            Self::Unknown => 3,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((output, outcome)) => {
            print!("{output}");
            if !output.is_empty() && !output.ends_with('\n') {
                println!();
            }
            ExitCode::from(outcome.code())
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(error_code(&err))
        }
    }
}

fn error_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::TransitivityLevelUnknown(_) | Error::LevelTooLarge { .. }) => 3,
        _ => 2,
    }
}

fn load(opts: &Options) -> Result<MealyAutomaton> {
    let text = match (&opts.input, &opts.rec, &opts.named) {
        (Some(path), None, None) => {
            if path.as_os_str() == "-" {
                let mut s = String::new();
                std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
                s
            } else {
                std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
            }
        }
        (None, Some(rec), None) => rec.clone(),
        (None, None, Some(name)) => {
            return catalog::by_name(name).ok_or_else(|| anyhow!("unknown automaton name `{name}`"));
        }
        (None, None, None) => bail!("no automaton given; use --in, --rec or --named"),
        _ => bail!("give exactly one of --in, --rec and --named"),
    };
    if text.trim_start().starts_with('{') {
        Ok(from_json(&text)?)
    } else {
        Ok(parse_wreath(&text)?)
    }
}

fn required<'a>(value: &'a Option<String>, flag: &str) -> Result<&'a str> {
    value.as_deref().ok_or_else(|| anyhow!("missing --{flag}"))
}

fn pretty(value: &Value) -> String {
    serde_json::to_string_pretty(value).expect("JSON values serialize") + "\n"
}

fn no_dot(format: Format) -> Result<()> {
    if format == Format::Dot {
        bail!("DOT output is not available for this command");
    }
    Ok(())
}

fn emit_automaton(a: &MealyAutomaton, format: Format) -> String {
    match format {
        Format::Text => to_text(a),
        Format::Json => pretty(&to_json_value(a)),
        Format::Dot => automaton_dot(a),
    }
}

fn emit_bool(name: &str, value: bool, format: Format) -> Result<(String, Outcome)> {
    no_dot(format)?;
    let out = match format {
        Format::Json => pretty(&json!({ name: value })),
        _ => format!("{value}\n"),
    };
    Ok((out, Outcome::from_bool(value)))
}

fn word_text(a: &MealyAutomaton, g: &GroupWord) -> String {
    if g.is_empty() {
        "1".to_string()
    } else {
        g.display(a).to_string()
    }
}

fn run(cli: &Cli) -> Result<(String, Outcome)> {
    let opts = &cli.opts;
    let format = opts.format;
    let a = load(opts)?;
    let ok = |s: String| Ok((s, Outcome::True));
    match cli.command {
        Command::Show => ok(emit_automaton(&a, format)),
        Command::Props => {
            no_dot(format)?;
            let p = a.properties();
            let minimal = is_minimal(&a);
            match format {
                Format::Json => ok(pretty(&json!({
                    "states": p.num_states,
                    "degree": p.degree,
                    "invertible": p.invertible,
                    "reversible": p.reversible,
                    "bireversible": p.bireversible,
                    "minimal": minimal,
                }))),
                _ => ok(format!(
                    "states: {}\ndegree: {}\ninvertible: {}\nreversible: {}\nbireversible: {}\nminimal: {}\n",
                    p.num_states, p.degree, p.invertible, p.reversible, p.bireversible, minimal
                )),
            }
        }
        Command::Inverse => ok(emit_automaton(&a.inverse()?, format)),
        Command::Dual => ok(emit_automaton(&a.dual(), format)),
        Command::Minimize => ok(emit_automaton(&minimize(&a).0, format)),
        Command::Canon => {
            let form = canonical_form(&a);
            let relabeled = canonical_relabeling(&a);
            match format {
                Format::Text => ok(format!("canonical: {form}\n{}", to_text(&relabeled))),
                Format::Json => ok(pretty(&json!({
                    "canonical": form.to_string(),
                    "automaton": to_json_value(&relabeled),
                }))),
                Format::Dot => ok(automaton_dot(&relabeled)),
            }
        }
        Command::Run => {
            no_dot(format)?;
            let name = required(&opts.state, "state")?;
            let q = a
                .state_index(name)
                .ok_or_else(|| Error::UnknownState(name.to_string()))?;
            let word = a.parse_letter_word(opts.vertex.as_deref().unwrap_or(""))?;
            let (end, output) = a.run(q, &word)?;
            let (output, end) = (a.format_letter_word(&output), a.state_name(end));
            match format {
                Format::Json => ok(pretty(&json!({ "output": output, "state": end }))),
                _ => ok(format!("output: {output}\nstate: {end}\n")),
            }
        }
        Command::MdReduce => {
            no_dot(format)?;
            let trace = md_reduce(&a);
            let op_name = |op: MdOperation| match op {
                MdOperation::Minimize => "minimize",
                MdOperation::Dualize => "dual",
            };
            match format {
                Format::Json => ok(pretty(&json!({
                    "steps": trace.steps.iter().map(|s| json!({
                        "operation": op_name(s.operation),
                        "states": s.states,
                        "letters": s.letters,
                    })).collect::<Vec<_>>(),
                    "md_trivial": trace.md_trivial,
                    "certifies_infinite": trace.certifies_infinite(),
                    "result": to_json_value(&trace.result),
                }))),
                _ => {
                    let mut s = String::new();
                    for step in &trace.steps {
                        let _ = writeln!(
                            s,
                            "{}: {} states, {} letters",
                            op_name(step.operation),
                            step.states,
                            step.letters
                        );
                    }
                    let _ = writeln!(s, "md-trivial: {}", trace.md_trivial);
                    let _ = writeln!(s, "certifies infinite: {}", trace.certifies_infinite());
                    s.push_str(&to_text(&trace.result));
                    ok(s)
                }
            }
        }
        Command::Act => {
            no_dot(format)?;
            let group = Group::new(&a);
            let g = group.parse(required(&opts.element, "element")?)?;
            let v = a.parse_letter_word(required(&opts.vertex, "vertex")?)?;
            let image = a.format_letter_word(&group.act(&g, &v)?);
            match format {
                Format::Json => ok(pretty(&json!({ "image": image }))),
                _ => ok(format!("{image}\n")),
            }
        }
        Command::Section => {
            no_dot(format)?;
            let group = Group::new(&a);
            let g = group.parse(required(&opts.element, "element")?)?;
            let v = a.parse_letter_word(required(&opts.vertex, "vertex")?)?;
            let section = word_text(&a, &group.section(&g, &v)?);
            match format {
                Format::Json => ok(pretty(&json!({ "section": section }))),
                _ => ok(format!("{section}\n")),
            }
        }
        Command::IsTrivial => {
            let group = Group::new(&a);
            let g = group.parse(required(&opts.element, "element")?)?;
            emit_bool("trivial", group.is_trivial(&g)?, format)
        }
        Command::Equal => {
            let group = Group::new(&a);
            let g = group.parse(required(&opts.element, "element")?)?;
            let h = group.parse(required(&opts.other, "other")?)?;
            emit_bool("equal", group.are_equal(&g, &h)?, format)
        }
        Command::Order => {
            no_dot(format)?;
            let group = Group::new(&a);
            let g = group.parse(required(&opts.element, "element")?)?;
            let cap = opts.cap.unwrap_or(1000);
            let (order, outcome) = match group.order_bounded(&g, cap)? {
                OrderVerdict::Finite(k) => (Some(k), Outcome::True),
                OrderVerdict::ExceedsCap(_) => (None, Outcome::Unknown),
            };
            let out = match (format, order) {
                (Format::Json, _) => pretty(&json!({ "order": order, "cap": cap })),
                (_, Some(k)) => format!("{k}\n"),
                (_, None) => format!("order exceeds {cap}\n"),
            };
            Ok((out, outcome))
        }
        Command::Enumerate => {
            no_dot(format)?;
            let cap = opts.cap.unwrap_or(10_000);
            match enumerate_group(&a, cap) {
                FinitenessVerdict::Finite { count, elements } => {
                    let words: Vec<String> = elements.iter().map(|g| word_text(&a, g)).collect();
                    match format {
                        Format::Json => ok(pretty(&json!({ "finite": true, "count": count, "elements": words }))),
                        _ => ok(format!("finite: {count} elements\n{}\n", words.join("\n"))),
                    }
                }
                FinitenessVerdict::ExceedsCap(cap) => {
                    let out = match format {
                        Format::Json => pretty(&json!({ "finite": null, "cap": cap })),
                        _ => format!("more than {cap} elements\n"),
                    };
                    Ok((out, Outcome::Unknown))
                }
            }
        }
        Command::Orbits => {
            no_dot(format)?;
            let n = opts.depth.unwrap_or(1);
            let part = level_orbits(&a, n)?;
            let orbits: Vec<(String, usize)> = (0..part.num_orbits())
                .map(|o| (a.format_letter_word(&part.representative(o)), part.sizes()[o]))
                .collect();
            match format {
                Format::Json => ok(pretty(&json!({
                    "level": n,
                    "orbits": orbits.iter().map(|(r, s)| json!({ "representative": r, "size": s })).collect::<Vec<_>>(),
                }))),
                _ => ok(orbits.iter().map(|(r, s)| format!("{r} {s}\n")).collect()),
            }
        }
        Command::OrbitTree => {
            let tree = orbit_tree(&a, opts.depth.unwrap_or(3))?;
            match format {
                Format::Json => ok(pretty(&orbit_tree_json(&tree))),
                Format::Dot => ok(orbit_tree_dot(&tree)),
                Format::Text => {
                    let mut s = String::new();
                    for (n, level) in tree.levels.iter().enumerate().skip(1) {
                        let _ = writeln!(s, "level {n}:");
                        for node in level {
                            let _ = writeln!(
                                s,
                                "  {} size={} label={} parent={}",
                                tree.format_word(&node.representative),
                                node.size,
                                node.label,
                                node.parent.unwrap_or(0)
                            );
                        }
                    }
                    ok(s)
                }
            }
        }
        Command::Tlevel => {
            no_dot(format)?;
            let (level, exact) = match transitivity_level(&a, opts.cap.unwrap_or(8))? {
                TransitivityVerdict::ExactLevel(t) => (t, true),
                TransitivityVerdict::AtLeast(t) => (t, false),
            };
            let out = match format {
                Format::Json => pretty(&json!({ "level": level, "exact": exact })),
                _ if exact => format!("{level}\n"),
                _ => format!("at least {level}\n"),
            };
            Ok((out, if exact { Outcome::True } else { Outcome::Unknown }))
        }
        Command::SphTransitive => {
            no_dot(format)?;
            let group = Group::new(&a);
            let g = group.parse(required(&opts.element, "element")?)?;
            let failure = spherical_failure_level(&group, &g)?;
            let out = match (format, failure) {
                (Format::Json, _) => pretty(&json!({ "transitive": failure.is_none(), "failure_level": failure })),
                (_, None) => "true\n".to_string(),
                (_, Some(level)) => format!("false (not transitive on level {level})\n"),
            };
            Ok((out, Outcome::from_bool(failure.is_none())))
        }
        Command::OrbitAutomaton => {
            let rep = a.parse_letter_word(required(&opts.orbit_rep, "orbit-rep")?)?;
            let ctx = orbit_context(&a, &rep)?;
            let result = orbit_automaton(&ctx);
            match format {
                Format::Dot => ok(automaton_dot(&result.minimized)),
                Format::Json => {
                    let mut value = orbit_automaton_json(&result);
                    value["t"] = json!(ctx.t());
                    value["k"] = json!(ctx.k());
                    value["orbit_size"] = json!(ctx.orbit_size());
                    ok(pretty(&value))
                }
                Format::Text => {
                    let mut s = format!(
                        "t: {}\nk: {}\norbit size: {}\nraw states: {}\nminimized:\n{}",
                        ctx.t(),
                        ctx.k(),
                        ctx.orbit_size(),
                        result.raw.num_states(),
                        to_text(&result.minimized)
                    );
                    if !s.ends_with('\n') {
                        s.push('\n');
                    }
                    s.push_str("legend:\n");
                    for (name, members) in result.legend() {
                        let _ = writeln!(s, "  {name}: {}", members.join(", "));
                    }
                    ok(s)
                }
            }
        }
        Command::Tau => {
            no_dot(format)?;
            let rep = a.parse_letter_word(required(&opts.orbit_rep, "orbit-rep")?)?;
            let ctx = orbit_context(&a, &rep)?;
            let result = orbit_automaton(&ctx);
            let v = a.parse_letter_word(opts.vertex.as_deref().unwrap_or(""))?;
            let g = Group::new(&a).parse(required(&opts.element, "element")?)?;
            let raw = tau(&ctx, &result, &v, &g)?;
            let raw_text = word_text(&result.raw, &raw);
            let min_text = word_text(&result.minimized, &result.minimize_word(&raw));
            match format {
                Format::Json => ok(pretty(&json!({ "raw": raw_text, "minimized": min_text }))),
                _ => ok(format!("raw: {raw_text}\nminimized: {min_text}\n")),
            }
        }
        Command::Decompose => {
            let report = decompose(&a, opts.depth.unwrap_or(6), opts.cap.unwrap_or(0))?;
            match format {
                Format::Json => ok(pretty(&decomposition_json(&report))),
                Format::Dot => ok(decomposition_dot(&report)),
                Format::Text => {
                    let mut s = String::new();
                    for (i, node) in report.nodes.iter().enumerate() {
                        let group = match node.group.as_ref().map(|g| g.count()) {
                            Some(Some(n)) => format!(", group of order {n}"),
                            Some(None) => ", group exceeds cap".to_string(),
                            None => String::new(),
                        };
                        let _ = writeln!(
                            s,
                            "#{i}: {} states, {} letters, {:?}{group}",
                            node.automaton.num_states(),
                            node.automaton.degree(),
                            node.verdict
                        );
                        for e in &node.edges {
                            let _ = writeln!(
                                s,
                                "  orbit {} (size {}, k={}) -> #{}",
                                node.automaton.format_letter_word(&e.orbit_rep),
                                e.orbit_size,
                                e.k,
                                e.target
                            );
                        }
                    }
                    ok(s)
                }
            }
        }
        Command::Certify => {
            no_dot(format)?;
            let rep = a.parse_state_word(required(&opts.orbit_rep, "orbit-rep")?)?;
            let depth = opts.depth.unwrap_or(8);
            match certify_nontrivial(&a, &rep, depth) {
                Ok(cert) => match format {
                    Format::Json => ok(pretty(&json!({
                        "certified": true,
                        "depth": depth,
                        "levels": cert.levels.iter().map(|l| json!({
                            "level": l.level,
                            "vertices": l.vertices,
                            "witness": a.format_state_word(&l.witness),
                        })).collect::<Vec<_>>(),
                    }))),
                    _ => {
                        let mut s = format!("certified to depth {depth}\n");
                        for l in &cert.levels {
                            let _ = writeln!(
                                s,
                                "level {}: {} vertices, witness {}",
                                l.level,
                                l.vertices,
                                a.format_state_word(&l.witness)
                            );
                        }
                        ok(s)
                    }
                },
                Err(err @ (Error::TransitivityFailed(_) | Error::NoWitness(_))) => {
                    let out = match format {
                        Format::Json => pretty(&json!({ "certified": false, "reason": err.to_string() })),
                        _ => format!("not certified: {err}\n"),
                    };
                    Ok((out, Outcome::False))
                }
                Err(err) => Err(err.into()),
            }
        }
        Command::SymClass => {
            no_dot(format)?;
            let class = symmetry_class(&a);
            match format {
                Format::Json => ok(pretty(&json!({
                    "size": class.len(),
                    "members": class.iter().map(to_json_value).collect::<Vec<_>>(),
                }))),
                _ => {
                    let members: Vec<String> = class.iter().map(|b| to_text(b).trim_end().to_string()).collect();
                    ok(format!("{} automata\n\n{}\n", class.len(), members.join("\n\n")))
                }
            }
        }
        Command::Petals => {
            let diagram = petal_diagram(&symmetry_class(&a))?;
            match format {
                Format::Json => ok(pretty(&petal_json(&diagram))),
                Format::Dot => ok(petal_dot(&diagram)),
                Format::Text => {
                    let n = diagram.nodes.len();
                    let steps = (0..n).map(|i| diagram.steps_to_cycle(i)).max().unwrap_or(0);
                    let mut s = format!(
                        "nodes: {n}\nclasses: {}\nimage: {:?}\nfixed points: {:?}\nmax steps to a cycle: {steps}\n",
                        diagram.classes.len(),
                        diagram.image(),
                        diagram.fixed_points()
                    );
                    for (i, &j) in diagram.edges.iter().enumerate() {
                        let _ = writeln!(s, "{i} -> {j} (class {})", diagram.tags[i]);
                    }
                    ok(s)
                }
            }
        }
    }
}
