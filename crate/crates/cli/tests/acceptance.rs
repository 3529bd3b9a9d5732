//! Acceptance criteria driven through the command-line binary, one
//! PASS/FAIL line each. Runs without the test harness; exits nonzero if any
//! criterion fails.

use std::process::{Command, ExitCode};
use std::time::Instant;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn run(args: &[&str]) -> Result<(i32, String), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_strongmono"))
        .args(args)
        .env_remove("STRONGMONO_PRECISION_BITS")
        .output()
        .map_err(|e| e.to_string())?;
    let text = String::from_utf8_lossy(&out.stdout).into_owned();
    if out.status.code() == Some(2) {
        return Err(format!("usage error for {args:?}: {}", String::from_utf8_lossy(&out.stderr)));
    }
    Ok((out.status.code().unwrap_or(-1), text))
}

/// `verify <suite>` must exit 0; returns the suite's summary line.
fn suite(name: &str) -> Outcome {
    let (code, text) = run(&["verify", name])?;
    let head = text.lines().next().unwrap_or_default().to_string();
    if code == 0 {
        Ok(head)
    } else {
        Err(text)
    }
}

fn csv_records(text: &str) -> Result<Vec<Vec<String>>, String> {
    let mut lines = text.lines();
    if lines.next() != Some("N,M,r_bar,r_db,residual,fidelity") {
        return Err(format!("bad header in {text}"));
    }
    Ok(lines.map(|l| l.split(',').map(str::to_string).collect()).collect())
}

fn num(s: &str) -> Result<f64, String> {
    s.parse().map_err(|_| format!("not a number: '{s}'"))
}

fn residual(args: &[&str]) -> Result<f64, String> {
    let mut full = vec!["residual"];
    full.extend_from_slice(args);
    let (code, text) = run(&full)?;
    if code != 0 {
        return Err(format!("{full:?} exited {code}"));
    }
    num(&csv_records(&text)?[0][4])
}

fn criterion_1() -> Outcome {
    let head = suite("positivity")?;
    let g = residual(&["--n", "1000", "--rbar", "1.15"])?;
    if !(g > 0.0 && (g - 6.13969489979e-26).abs() < 1e-36) {
        return Err(format!("G(1000, 0, 1.15) = {g}"));
    }
    Ok(format!("{head}; G(1000, 0, 1.15) = {g:e}"))
}

fn criterion_2() -> Outcome {
    let head = suite("recursion")?;
    let g = residual(&["--n", "3", "--m", "0", "--rbar", "0.5"])?;
    // Term by term: f_0 - 2 f_1 with f_0 = asinh^2(2 sqrt 2 sinh 1 / 3), f_1 = asinh^2(2 sinh 1 / sqrt(3 (e^2 + 2))).
    let f0 = (2.0 * 2f64.sqrt() * 1f64.sinh() / 3.0).asinh().powi(2);
    let f1 = (2.0 * 1f64.sinh() / (3.0 * (2f64.exp() + 2.0)).sqrt()).asinh().powi(2);
    let by_hand = f0 - 2.0 * f1;
    if (g - by_hand).abs() > 1e-5 {
        return Err(format!("G(3, 0, 0.5) = {g}, term by term {by_hand}"));
    }
    Ok(format!("{head}; G(3, 0, 0.5) = {g} (term by term {by_hand:.12})"))
}

fn criterion_4() -> Outcome {
    let head = suite("recursion")?;
    let (code, text) = run(&["residual", "--n", "8", "--m", "2", "--rbar", "0.7", "--terms", "--format", "json"])?;
    if code != 0 {
        return Err(text);
    }
    let rec = &serde_json::from_str::<serde_json::Value>(&text).map_err(|e| e.to_string())?[0];
    let mut total = rec["residual"].as_f64().ok_or("no residual")?;
    for t in rec["per_K_terms"].as_array().ok_or("no terms")? {
        total += num(t["multiplicity"].as_str().ok_or("multiplicity")?)? * t["value"].as_f64().ok_or("value")?;
    }
    // E^{1|7} with 10 modes in total.
    let r: f64 = 0.7;
    let x = 2.0 * 7f64.sqrt() * (2.0 * r).sinh() / (10f64.sqrt() * ((4.0 * r).exp() * 2.0 + 8.0).sqrt());
    let direct = x.asinh().powi(2);
    if (total - direct).abs() > 1e-10 * direct {
        return Err(format!("bookkeeping {total} vs {direct}"));
    }
    Ok(format!("{head}; N = 8 terms add up to E^(1|7) = {direct:.12}"))
}

fn criterion_6() -> Outcome {
    let head = suite("scale")?;
    for size in ["1", "2", "3", "5"] {
        let g = residual(&["--n", "6", "--rbar", "1", "--molecule-size", size])?;
        let mode = residual(&["--n", "6", "--rbar", "1"])?;
        if g != mode {
            return Err(format!("molecule size {size}: {g} vs {mode}"));
        }
    }
    Ok(head)
}

fn criterion_7() -> Outcome {
    let head = suite("fidelity")?;
    let (_, text) = run(&["fidelity", "--n", "3", "--rbar", "0"])?;
    let f0 = &csv_records(&text)?[0][5];
    if f0 != "0.5" {
        return Err(format!("F(0) = {f0}"));
    }
    Ok(head)
}

fn criterion_8() -> Outcome {
    let head = suite("monotonicity")?;
    let (code, text) = run(&["sweep", "--n", "2:10,log:10:1000:6", "--rbar", "0.5:1.1:0.2,1.15", "--format", "json"])?;
    if code != 0 {
        return Err(text);
    }
    let recs: Vec<serde_json::Value> = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let ns: Vec<u64> = {
        let mut v: Vec<u64> = recs.iter().map(|r| r["N"].as_u64().unwrap()).collect();
        v.dedup();
        v
    };
    let per_n = recs.len() / ns.len();
    let g = |i_n: usize, i_r: usize| recs[i_n * per_n + i_r]["residual"].as_f64().unwrap();
    for (i_n, n) in ns.iter().enumerate() {
        for i_r in 0..per_n {
            if g(i_n, i_r).is_nan() || g(i_n, i_r) <= 0.0 {
                return Err(format!("G = {} at N = {}", g(i_n, i_r), n));
            }
            if i_r > 0 && g(i_n, i_r) <= g(i_n, i_r - 1) {
                return Err(format!("not increasing in r at N = {}", n));
            }
            if i_n > 0 && g(i_n, i_r) > g(i_n - 1, i_r) {
                return Err(format!("increasing in N at N = {}", n));
            }
        }
    }
    let last = ns.len() - 1;
    Ok(format!(
        "{head}; sweep output N up to {}: G(1000, 0, 1.15) / G(2, 0, 1.15) = {:e}",
        ns[last],
        g(last, per_n - 1) / g(0, per_n - 1)
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("Residual positivity", criterion_1),
        ("N = 3 coincidence", criterion_2),
        ("Oracle equivalence", || suite("oracle")),
        ("Recursion identity", criterion_4),
        ("Gamma identity", || suite("gamma")),
        ("Scale invariance", criterion_6),
        ("Fidelity map", criterion_7),
        ("Large-N sweep", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] {}. {name} ({secs:.1}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {}. {name} ({secs:.1}s): {why}", i + 1);
            }
        }
    }
    println!("cli acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
