//! Acceptance criteria, one line per criterion. Runs without the libtest
//! harness so the lines always reach the output.

mod common;

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use common::{brute_r, family, hat_orbits, mutations, set, Instance};
use paglob::globalize::{check_hat_orbit_relation, effros_flags, relation_r};
use paglob::selector::{mu_tau_continuity, selector_report};
use paglob::spec::{ActionSpec, BUNDLED_EXAMPLE};
use paglob::vaught::{check_idealistic, check_open_case, check_transform_identities};
use paglob::{Check, Globalization, Outcome};

const LIMIT_SWEEP: Duration = Duration::from_secs(10);
const LIMIT_PROP31: Duration = Duration::from_secs(60);
const LIMIT_EXAMPLE: Duration = Duration::from_secs(1);
const MUTATIONS: usize = 200;
const SEED: u64 = 0x5eed_2024;

struct Outcomes {
    lines: Vec<(usize, bool, String)>,
}

impl Outcomes {
    fn record(&mut self, id: usize, title: &str, result: Result<String, String>) {
        let (ok, msg) = match result {
            Ok(m) => (true, m),
            Err(m) => (false, m),
        };
        println!(
            "criterion {id:>2} {}: {title}: {msg}",
            if ok { "PASS" } else { "FAIL" }
        );
        self.lines.push((id, ok, msg));
    }
}

fn first_failure(instances: &[Instance], check: impl Fn(&Instance) -> Check) -> Result<usize, String> {
    for inst in instances {
        let c = check(inst);
        if let Some((path, f)) = c.failures().into_iter().next() {
            return Err(format!(
                "{}: {path} witness {}",
                inst.name,
                f.witness.clone().unwrap_or_default()
            ));
        }
    }
    Ok(instances.len())
}

fn criterion1(base: &[Instance], mutated: &[Instance]) -> Result<String, String> {
    let start = Instant::now();
    for inst in base.iter().chain(mutated) {
        let v = inst.pa.validate();
        if !v.formulations_agree() {
            return Err(format!(
                "{}: pair {:?} vs bijection {:?}",
                inst.name, v.pair, v.bijection
            ));
        }
    }
    for inst in mutated {
        let v = inst.pa.validate();
        if v.is_partial_action() {
            return Err(format!("{}: mutation accepted", inst.name));
        }
        if v.violations().any(|w| w.witness.is_empty()) {
            return Err(format!("{}: rejection without witness", inst.name));
        }
    }
    let elapsed = start.elapsed();
    if elapsed > LIMIT_SWEEP {
        return Err(format!("took {elapsed:?}, limit {LIMIT_SWEEP:?}"));
    }
    Ok(format!(
        "{} family instances and {} mutations, formulations agree, every mutation rejected with a witness ({elapsed:.2?})",
        base.len(),
        mutated.len()
    ))
}

fn criterion2(valid: &[Instance]) -> Result<String, String> {
    for inst in valid {
        let pa = &inst.pa;
        let r = brute_r(pa);
        let hat = hat_orbits(pa);
        if r != hat {
            return Err(format!("{}: brute-force R differs from hat orbits", inst.name));
        }
        let lib = relation_r(pa).map_err(|e| format!("{}: {e}", inst.name))?;
        let m = r.len();
        if let Some((p, q)) = (0..m)
            .flat_map(|p| (0..m).map(move |q| (p, q)))
            .find(|&(p, q)| lib.related(p, q) != r[p][q])
        {
            return Err(format!("{}: library R wrong at ({p},{q})", inst.name));
        }
        let c = check_hat_orbit_relation(pa);
        if !c.passed() {
            return Err(format!("{}: {}", inst.name, c.render_text()));
        }
    }
    Ok(format!(
        "R = hat-orbit relation on {} valid instances",
        valid.len()
    ))
}

fn criterion3(valid: &[Instance]) -> Result<String, String> {
    let mut open_case = 0;
    for inst in valid {
        let glob = Globalization::build(&inst.pa).map_err(|e| format!("{}: {e}", inst.name))?;
        let c = glob.check_embedding();
        if let Some((path, f)) = c.failures().into_iter().next() {
            return Err(format!(
                "{}: {path} witness {}",
                inst.name,
                f.witness.clone().unwrap_or_default()
            ));
        }
        if c.find("ι(X) open in X_G")
            .is_some_and(|o| o.outcome == Outcome::Pass)
        {
            open_case += 1;
        }
    }
    Ok(format!(
        "embedding clauses hold on {} valid instances, ι(X) open checked on {open_case}",
        valid.len()
    ))
}

fn criterion4(small: &[Instance]) -> Result<String, String> {
    let start = Instant::now();
    let n = first_failure(small, |inst| check_transform_identities(&inst.pa))?;
    let elapsed = start.elapsed();
    if elapsed > LIMIT_PROP31 {
        return Err(format!("took {elapsed:?}, limit {LIMIT_PROP31:?}"));
    }
    Ok(format!(
        "identities (i)-(iv) on {n} instances with |G|,|X| <= 3 ({elapsed:.2?})"
    ))
}

fn criterion5(small: &[Instance]) -> Result<String, String> {
    let n = first_failure(small, |inst| check_open_case(&inst.pa))?;
    Ok(format!("open-set formula on {n} instances"))
}

fn criterion6(valid: &[Instance]) -> Result<String, String> {
    let n = first_failure(valid, |inst| check_idealistic(&inst.pa))?;
    Ok(format!(
        "C not in I_C and A_I agreement for all A in X×X on {n} instances"
    ))
}

fn criterion7(valid: &[Instance]) -> Result<String, String> {
    let n = first_failure(valid, |inst| match selector_report(&inst.pa) {
        Ok((_, _, borel, _)) => borel.clauses,
        Err(e) => Check::fail("selector report", e.to_string()),
    })?;
    Ok(format!("clauses (a)-(e) on {n} valid instances"))
}

fn criterion8(valid: &[Instance]) -> Result<String, String> {
    let n = first_failure(valid, |inst| match selector_report(&inst.pa) {
        Ok((_, _, _, check)) => check.find("bireducibility").cloned().expect("section present"),
        Err(e) => Check::fail("selector report", e.to_string()),
    })?;
    Ok(format!("both reductions on {n} valid instances"))
}

fn criterion9() -> Result<String, String> {
    let start = Instant::now();
    let pa = ActionSpec::parse(BUNDLED_EXAMPLE)
        .and_then(|s| s.to_partial_action())
        .map_err(|e| e.to_string())?;
    let (glob, _, borel, _) = selector_report(&pa).map_err(|e| e.to_string())?;
    let space = glob.space();
    if glob.num_classes() != 4 {
        return Err(format!("{} classes, expected 4", glob.num_classes()));
    }
    let sep = space.separation();
    if !sep.t0 || sep.t2 {
        return Err(format!("separation {sep:?}, expected T0 and not T2"));
    }
    // x0 is point 0; classes [g,x0] for g in Z3
    let x0_classes: Vec<usize> = (0..3).map(|g| glob.class_of(g, 0)).collect();
    for (i, &c) in x0_classes.iter().enumerate() {
        for &d in &x0_classes[i + 1..] {
            if space.nbhd(c).is_disjoint(space.nbhd(d)) {
                return Err(format!("classes {c} and {d} are separated"));
            }
        }
    }
    // G×X index g*2+x with x0=0, v=1
    let expected_t = set(&[1, 0, 2, 4]);
    if borel.transversal != expected_t {
        return Err(format!("transversal {} expected {expected_t}", borel.transversal));
    }
    let rows = mu_tau_continuity(&glob, &borel);
    let origin = glob.class_of(0, 0);
    if !rows[1].discontinuous_at.contains(origin) {
        return Err(format!(
            "μ_1 continuous at [(0,x0)]; discontinuities {}",
            rows[1].discontinuous_at
        ));
    }
    let elapsed = start.elapsed();
    if elapsed > LIMIT_EXAMPLE {
        return Err(format!("took {elapsed:?}, limit {LIMIT_EXAMPLE:?}"));
    }
    Ok(format!(
        "4 classes, T0 and not T2 (T1={}), x0-classes pairwise inseparable, transversal {{(0,v)}} ∪ {{(g,x0)}}, μ_1 discontinuous at [(0,x0)] ({elapsed:.2?})",
        sep.t1
    ))
}

fn criterion10(valid: &[Instance]) -> Result<String, String> {
    let mut discrete = 0;
    let mut reported = 0;
    for inst in valid {
        let flags = effros_flags(&inst.pa).map_err(|e| format!("{}: {e}", inst.name))?;
        if flags.discrete_carrier {
            discrete += 1;
            if !flags.agree() {
                return Err(format!("{}: {flags:?}", inst.name));
            }
        } else {
            reported += 1;
        }
    }
    Ok(format!(
        "flags agree on {discrete} discrete carriers; {reported} non-discrete reported only"
    ))
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("paglob-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn criterion11() -> Result<String, String> {
    let bin = env!("CARGO_BIN_EXE_paglob");
    let example = scratch("example48.json", BUNDLED_EXAMPLE);
    let run = |args: &[&str]| Command::new(bin).args(args).output().map_err(|e| e.to_string());
    let ex = example.to_str().unwrap();

    let a = run(&["report", ex, "--format", "json"])?;
    let b = run(&["report", ex, "--format", "json"])?;
    if a.status.code() != Some(0) {
        return Err(format!("report exited {:?}", a.status.code()));
    }
    if a.stdout != b.stdout {
        return Err("report output differs between runs".into());
    }

    let mutated = BUNDLED_EXAMPLE.replace(r#""1": {"v": "v"}"#, r#""1": {"v": "x0"}"#);
    if mutated == BUNDLED_EXAMPLE {
        return Err("mutation did not apply".into());
    }
    let m = run(&["validate", scratch("mutated.json", &mutated).to_str().unwrap()])?;
    let out = String::from_utf8_lossy(&m.stdout);
    if m.status.code() != Some(1) || !out.contains("witness:") {
        return Err(format!("mutated spec exited {:?}:\n{out}", m.status.code()));
    }
    let witness = out
        .lines()
        .find(|l| l.contains("witness:"))
        .unwrap_or("")
        .trim()
        .to_string();

    let bad = run(&["report", scratch("bad.json", "{\"group\": ").to_str().unwrap()])?;
    if bad.status.code() != Some(2) {
        return Err(format!("malformed JSON exited {:?}", bad.status.code()));
    }
    Ok(format!(
        "exit 0 with identical JSON twice; mutated exits 1 ({witness}); malformed exits 2"
    ))
}

fn main() {
    let mut out = Outcomes { lines: Vec::new() };
    let start = Instant::now();
    let base = family(4, 3);
    let mutated = mutations(&base, MUTATIONS, SEED);
    let valid: Vec<Instance> = base
        .iter()
        .filter(|i| i.pa.validate().is_valid())
        .cloned()
        .collect();
    let small: Vec<Instance> = valid
        .iter()
        .filter(|i| i.pa.group().order() <= 3)
        .cloned()
        .collect();

    out.record(
        1,
        "axiom formulations agree, mutations rejected",
        criterion1(&base, &mutated),
    );
    out.record(2, "R equals the hat-orbit relation", criterion2(&valid));
    out.record(3, "embedding into the enveloping space", criterion3(&valid));
    out.record(4, "Vaught transform identities", criterion4(&small));
    out.record(5, "open-set formula for Δ", criterion5(&small));
    out.record(6, "idealistic structure", criterion6(&valid));
    out.record(7, "transversal topology clauses", criterion7(&valid));
    out.record(8, "bireducibility", criterion8(&valid));
    out.record(9, "finite analog of the integer example", criterion9());
    out.record(10, "Effros flags on discrete carriers", criterion10(&valid));
    out.record(11, "CLI contract", criterion11());

    let failed: Vec<usize> = out.lines.iter().filter(|l| !l.1).map(|l| l.0).collect();
    println!(
        "acceptance: {}/{} criteria passed in {:.2?}",
        out.lines.len() - failed.len(),
        out.lines.len(),
        start.elapsed()
    );
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
