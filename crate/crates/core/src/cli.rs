//! The `paglob` command line.
//!
//! Exit status: 0 when every check passes, 1 when a check fails (the report
//! names a witness), 2 for unreadable input or bad usage.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::globalize::{check_hat_orbit_relation, effros_flags, effros_report, Globalization};
use crate::paction::PartialAction;
use crate::report::Check;
use crate::selector::{mu_tau_continuity, selector_report};
use crate::spec::{ActionSpec, InputError};
use crate::subset::Subset;
use crate::vaught::{self, Kind};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "paglob",
    version,
    about = "Partial actions of finite groups and their globalizations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the partial-action axioms in both formulations.
    Validate(Common),
    /// Build the enveloping space X_G with its action and embedding.
    Globalize {
        #[command(flatten)]
        common: Common,
        /// Write the specialization order and μ action graph as DOT.
        #[arg(long, value_name = "PATH")]
        dot: Option<PathBuf>,
    },
    /// Domains, stabilizers and orbits of every point.
    Orbits(Common),
    /// Evaluate one Vaught transform and the transform identities.
    Vaught {
        #[command(flatten)]
        common: Common,
        /// Comma-separated point names; empty for the empty set.
        #[arg(long, value_name = "POINTS", allow_hyphen_values = true)]
        set: String,
        /// Comma-separated group element indices, or `all`.
        #[arg(long, value_name = "ELEMENTS")]
        open_g: String,
        #[arg(long, value_enum)]
        kind: KindArg,
    },
    /// Selector, transversal topology and reducibility checks.
    Selector(Common),
    /// Every check.
    Report(Common),
}

#[derive(Debug, Args)]
struct Common {
    /// Action specification (JSON).
    file: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Delta,
    Star,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Kind {
        match k {
            KindArg::Delta => Kind::Delta,
            KindArg::Star => Kind::Star,
        }
    }
}

/// Runs the command line and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    match execute(cli.command) {
        Ok((output, format, extra)) => {
            if let Some((path, dot)) = extra {
                if let Err(e) = std::fs::write(&path, dot) {
                    let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
                    return EXIT_INPUT;
                }
            }
            let text = match format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&output.to_json()).expect("values serialize");
                    s.push('\n');
                    s
                }
                Format::Text => output.to_text(),
            };
            let _ = out.write_all(text.as_bytes());
            if output.checks.passed() {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
    }
}

struct Output {
    command: &'static str,
    label: Option<String>,
    checks: Check,
    data: Map<String, Value>,
}

impl Output {
    fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "label": self.label,
            "passed": self.checks.passed(),
            "checks": self.checks,
            "data": self.data,
        })
    }

    fn to_text(&self) -> String {
        let mut s = format!("paglob {}", self.command);
        if let Some(l) = &self.label {
            s.push_str(&format!(": {l}"));
        }
        s.push('\n');
        s.push_str(&self.checks.render_text());
        if !self.data.is_empty() {
            s.push('\n');
            for (k, v) in &self.data {
                s.push_str(&format!("{k}: {v}\n"));
            }
        }
        s.push_str(if self.checks.passed() {
            "result: PASS\n"
        } else {
            "result: FAIL\n"
        });
        s
    }
}

type Executed = (Output, Format, Option<(PathBuf, String)>);

fn load(path: &Path) -> Result<(ActionSpec, PartialAction), String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let spec = ActionSpec::parse(&text).map_err(|e| describe(path, e))?;
    let pa = spec.to_partial_action().map_err(|e| describe(path, e))?;
    Ok((spec, pa))
}

fn describe(path: &Path, e: InputError) -> String {
    format!("{}: {e}", path.display())
}

/// Point, pair and class names for one instance.
struct Names<'a> {
    points: &'a [String],
}

impl Names<'_> {
    fn point(&self, x: usize) -> String {
        self.points[x].clone()
    }

    fn points(&self, s: Subset) -> Value {
        json!(s.iter().map(|x| self.point(x)).collect::<Vec<_>>())
    }

    fn pair(&self, p: usize) -> String {
        let n = self.points.len();
        format!("({},{})", p / n, self.points[p % n])
    }

    fn class(&self, glob: &Globalization, c: usize) -> String {
        let (g, x) = glob.rep(c);
        format!("[{g},{}]", self.points[x])
    }

    fn classes(&self, glob: &Globalization, s: Subset) -> Value {
        json!(s.iter().map(|c| self.class(glob, c)).collect::<Vec<_>>())
    }
}

fn elements(s: Subset) -> Value {
    json!(s.to_vec())
}

fn validation_check(pa: &PartialAction) -> (Check, bool) {
    let v = pa.validate();
    let lemma = if v.is_partial_action() {
        pa.orbit_lemma_report()
    } else {
        Check::not_applicable("orbit lemma", "axioms fail")
    };
    let ok = v.is_valid();
    (Check::section("validation", vec![v.to_check(), lemma]), ok)
}

fn skipped(name: &str) -> Check {
    Check::not_applicable(name, "input is not a topological partial action")
}

fn orbits_data(pa: &PartialAction, names: &Names) -> Result<Map<String, Value>, String> {
    let e = pa.orbit_equivalence().map_err(|e| e.to_string())?;
    let points: Vec<Value> = (0..pa.size())
        .map(|x| {
            json!({
                "point": names.point(x),
                "G^x": elements(pa.g_upper(x)),
                "stabilizer": elements(pa.stabilizer(x)),
                "orbit": names.points(pa.orbit(x)),
            })
        })
        .collect();
    let star: Vec<String> = pa.star_set().iter().map(|p| names.pair(p)).collect();
    let mut m = Map::new();
    m.insert("points".into(), json!(points));
    m.insert(
        "orbits".into(),
        json!(e.classes().iter().map(|&c| names.points(c)).collect::<Vec<_>>()),
    );
    m.insert("G*X".into(), json!(star));
    Ok(m)
}

fn globalize_data(glob: &Globalization, names: &Names) -> Map<String, Value> {
    let k = glob.num_classes();
    let space = glob.space();
    let classes: Map<String, Value> = (0..k)
        .map(|c| {
            let members: Vec<String> = glob
                .relation()
                .class_members(c)
                .iter()
                .map(|p| names.pair(p))
                .collect();
            (names.class(glob, c), json!(members))
        })
        .collect();
    let nbhds: Map<String, Value> = (0..k)
        .map(|c| (names.class(glob, c), names.classes(glob, space.nbhd(c))))
        .collect();
    let iota: Map<String, Value> = (0..glob.source().size())
        .map(|x| (names.point(x), json!(names.class(glob, glob.iota(x)))))
        .collect();
    let mu: Map<String, Value> = glob
        .source()
        .group()
        .elements()
        .map(|g| {
            let row: Map<String, Value> = (0..k)
                .map(|c| (names.class(glob, c), json!(names.class(glob, glob.mu(g, c)))))
                .collect();
            (g.to_string(), Value::Object(row))
        })
        .collect();
    let mut m = Map::new();
    m.insert("classes".into(), Value::Object(classes));
    m.insert("neighbourhoods".into(), Value::Object(nbhds));
    m.insert("open_set_count".into(), json!(space.opens().len()));
    m.insert("separation".into(), json!(space.separation()));
    m.insert("iota".into(), Value::Object(iota));
    m.insert("mu".into(), Value::Object(mu));
    m
}

fn globalize_checks(pa: &PartialAction) -> (Check, Option<Globalization>) {
    match Globalization::build(pa) {
        Ok(glob) => {
            let check = Check::section(
                "globalization",
                vec![
                    glob.check_embedding(),
                    check_hat_orbit_relation(pa),
                    effros_report(pa),
                ],
            );
            (check, Some(glob))
        }
        Err(e) => (Check::fail("globalization", e.to_string()), None),
    }
}

fn selector_section(pa: &PartialAction, names: &Names) -> (Check, Map<String, Value>) {
    let (glob, s, borel, check) = match selector_report(pa) {
        Ok(r) => r,
        Err(e) => {
            return (
                Check::fail("selectors and Borel structure", e.to_string()),
                Map::new(),
            )
        }
    };
    let k = glob.num_classes();
    let selector: Map<String, Value> = (0..s.size())
        .map(|p| (names.pair(p), json!(names.pair(s.apply(p)))))
        .collect();
    let transversal: Vec<String> = borel.transversal.iter().map(|p| names.pair(p)).collect();
    let tau: Map<String, Value> = (0..k)
        .map(|c| (names.class(&glob, c), names.classes(&glob, borel.tau.nbhd(c))))
        .collect();
    let discontinuities: Map<String, Value> = mu_tau_continuity(&glob, &borel)
        .into_iter()
        .map(|row| (row.g.to_string(), names.classes(&glob, row.discontinuous_at)))
        .collect();
    let mut m = Map::new();
    m.insert("selector".into(), Value::Object(selector));
    m.insert("transversal".into(), json!(transversal));
    m.insert("tau_neighbourhoods".into(), Value::Object(tau));
    m.insert("tau_open_count".into(), json!(borel.tau_open_count));
    m.insert("quotient_open_count".into(), json!(borel.quotient_open_count));
    m.insert("tau_separation".into(), json!(borel.tau.separation()));
    m.insert("mu_tau_discontinuities".into(), Value::Object(discontinuities));
    (check, m)
}

fn parse_points(spec: &ActionSpec, list: &str) -> Result<Subset, String> {
    if list.trim().is_empty() {
        return Ok(Subset::EMPTY);
    }
    list.split(',')
        .map(|name| {
            let name = name.trim();
            spec.point_index(name)
                .ok_or_else(|| format!("--set: unknown point {name:?}"))
        })
        .collect()
}

fn parse_elements(order: usize, list: &str) -> Result<Subset, String> {
    if list.trim() == "all" {
        return Ok(Subset::full(order));
    }
    let v: Subset = list
        .split(',')
        .map(|s| match s.trim().parse::<usize>() {
            Ok(g) if g < order => Ok(g),
            _ => Err(format!("--open-g: {s:?} is not a group element below {order}")),
        })
        .collect::<Result<_, _>>()?;
    if v.is_empty() {
        return Err("--open-g: the open set must be nonempty".into());
    }
    Ok(v)
}

fn execute(command: Command) -> Result<Executed, String> {
    let (name, common) = match &command {
        Command::Validate(c) => ("validate", c),
        Command::Globalize { common, .. } => ("globalize", common),
        Command::Orbits(c) => ("orbits", c),
        Command::Vaught { common, .. } => ("vaught", common),
        Command::Selector(c) => ("selector", c),
        Command::Report(c) => ("report", c),
    };
    let (spec, pa) = load(&common.file)?;
    let names = Names { points: &spec.points };
    let format = common.format;
    let (validation, valid) = validation_check(&pa);
    let mut data = Map::new();
    let mut extra = None;
    let mut checks = vec![validation];

    match command {
        Command::Validate(_) => {
            data.insert(
                "G*X".into(),
                json!(pa.star_set().iter().map(|p| names.pair(p)).collect::<Vec<_>>()),
            );
        }
        Command::Orbits(_) => {
            if valid {
                data = orbits_data(&pa, &names)?;
            } else {
                checks.push(skipped("orbits"));
            }
        }
        Command::Globalize { dot, .. } => {
            if valid {
                let (check, glob) = globalize_checks(&pa);
                checks.push(check);
                if let Some(glob) = glob {
                    data = globalize_data(&glob, &names);
                    if let Ok(flags) = effros_flags(&pa) {
                        data.insert("effros".into(), json!(flags));
                    }
                    if let Some(path) = dot {
                        extra = Some((path, glob.to_dot(&spec.points)));
                    }
                }
            } else {
                checks.push(skipped("globalization"));
            }
        }
        Command::Vaught {
            set, open_g, kind, ..
        } => {
            let a = parse_points(&spec, &set)?;
            let v = parse_elements(pa.group().order(), &open_g)?;
            if valid {
                let kind = Kind::from(kind);
                let result = vaught::transform(&pa, kind, a, v).map_err(|e| e.to_string())?;
                let label = match kind {
                    Kind::Delta => "Δ",
                    Kind::Star => "*",
                };
                data.insert("kind".into(), json!(label));
                data.insert("A".into(), names.points(a));
                data.insert("V".into(), elements(v));
                data.insert("result".into(), names.points(result));
                let open = match vaught::open_case(&pa, a, v) {
                    Ok(oc) => {
                        data.insert("open_case_formula".into(), names.points(oc.by_formula));
                        let w = (!oc.holds())
                            .then(|| format!("formula {} vs transform {}", oc.by_formula, oc.by_transform));
                        Check::from_witness("open A: union formula equals Δ and is open", w)
                    }
                    Err(_) => {
                        Check::not_applicable("open A: union formula equals Δ and is open", "A is not open")
                    }
                };
                checks.push(Check::section(
                    "Vaught transforms",
                    vec![vaught::check_transform_identities(&pa), open],
                ));
            } else {
                checks.push(skipped("Vaught transforms"));
            }
        }
        Command::Selector(_) => {
            if valid {
                let (check, m) = selector_section(&pa, &names);
                checks.push(check);
                data = m;
            } else {
                checks.push(skipped("selectors and Borel structure"));
            }
        }
        Command::Report(_) => {
            if valid {
                data.insert("orbits".into(), Value::Object(orbits_data(&pa, &names)?));
                let (check, glob) = globalize_checks(&pa);
                checks.push(check);
                if let Some(glob) = glob {
                    let mut g = globalize_data(&glob, &names);
                    if let Ok(flags) = effros_flags(&pa) {
                        g.insert("effros".into(), json!(flags));
                    }
                    data.insert("globalization".into(), Value::Object(g));
                }
                checks.push(Check::section(
                    "Vaught transforms",
                    vec![
                        vaught::check_transform_identities(&pa),
                        vaught::check_open_case(&pa),
                        vaught::check_idealistic(&pa),
                    ],
                ));
                let (check, m) = selector_section(&pa, &names);
                checks.push(check);
                data.insert("selector".into(), Value::Object(m));
            } else {
                checks.push(skipped("globalization"));
            }
        }
    }

    let output = Output {
        command: name,
        label: spec.label.clone(),
        checks: Check::section(name, checks),
        data,
    };
    Ok((output, format, extra))
}
