use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ivp_core::arith::{FactorBudget, DEFAULT_SEED};
use ivp_core::closure::{in_sfd, z_closure_witness, IvpGenerator};
use ivp_core::element::AlgebraicElement;
use ivp_core::families::{
    crosscheck_family, family_verdict, make_family_seeded, FamilyKind, Mechanism, DEFAULT_CROSSCHECK_BUDGET,
};
use ivp_core::index::index_one_certificate_with;
use ivp_core::ivp::{is_integral_value, psi, psi_lcm_oracle, psi_membership_check};
use ivp_core::poly::parse_poly_any;
use ivp_core::sequence::{ball_cover, BreadthHint, classify_prefix, cover_class_crosscheck, greedy_divergent_subsequence, residue_classes, ValuationMatrix};
use ivp_core::verify::run_example_suite;
use ivp_core::{Error, RatPoly, Val};

#[derive(Parser)]
#[command(name = "ivp", version, about = "Certificates for integral-valued polynomials on sets of algebraic integers")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized internals (equal-degree splitting, corpus sampling).
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Worker threads for suite runs.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certify that Z[a] is the full ring of integers of Q(a).
    Index {
        #[arg(long)]
        min: String,
        #[arg(long)]
        trial_bound: Option<u64>,
        #[arg(long)]
        rho_iterations: Option<u64>,
    },
    /// The polynomial (X^(p^n) - X)...(X^p - X) and its properties.
    Psi {
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        n: u32,
        /// Compare with the brute-force lcm of all monic polynomials of degree <= n mod p.
        #[arg(long)]
        check_lcm: bool,
        /// Test psi(e)/p for the element given by --min and --expr.
        #[arg(long)]
        min: Option<String>,
        #[arg(long, default_value = "x")]
        expr: String,
    },
    /// Whether expr(a)/den is an algebraic integer for a root a of min.
    Integral {
        #[arg(long)]
        min: String,
        #[arg(long, default_value = "x")]
        expr: String,
        #[arg(long)]
        den: u64,
    },
    /// Classify a valuation matrix as pseudo-convergent, divergent or stationary.
    Classify {
        #[arg(long)]
        matrix: PathBuf,
        /// Also report a greedy pseudo-divergent subsequence (heuristic).
        #[arg(long)]
        greedy: bool,
    },
    /// Minimal ball cover and residue classes of a valuation matrix.
    Cover {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        delta: Option<String>,
        /// Compare cover sizes and class counts over a grid of radii.
        #[arg(long)]
        crosscheck: bool,
    },
    /// Generate an example family and classify it at a prime.
    Family {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long, default_value_t = 2)]
        p: u64,
        #[arg(long, default_value_t = 2)]
        n: u32,
        #[arg(long, default_value_t = 2)]
        c: u64,
        #[arg(long, default_value_t = 2)]
        d: u64,
        #[arg(long, default_value_t = 4)]
        len: usize,
        /// Prime at which valuations are taken.
        #[arg(long)]
        prime: u64,
        /// Recompute the closed-form valuations from minimal polynomials.
        #[arg(long)]
        crosscheck: bool,
        #[arg(long, default_value_t = DEFAULT_CROSSCHECK_BUDGET)]
        budget: usize,
    },
    /// Membership in the intersection of the sets S(f, d) for a generator list.
    Closure {
        #[arg(long)]
        gens: PathBuf,
        #[arg(long)]
        min: String,
        #[arg(long, default_value = "x")]
        expr: String,
    },
    /// Search for a binomial polynomial that is not integral at the element.
    Zwitness {
        #[arg(long)]
        min: String,
        #[arg(long, default_value = "x")]
        expr: String,
        #[arg(long, default_value_t = 8)]
        kmax: u32,
    },
    /// Rerun the registered example checks.
    #[command(name = "verify-paper")]
    Suite {
        /// Only run checks whose anchor contains this string.
        #[arg(long)]
        filter: Option<String>,
        /// Write report.json and report.txt into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    RootsOfUnityPPower,
    RootsOfUnityPrimes,
    NthRootTower,
    PrimeProductRadicals,
    FcnFamily,
    ScaledRing,
}

struct Output {
    json: Value,
    text: String,
    ok: bool,
}

fn output(json: Value, text: String) -> Output {
    Output { json, text, ok: true }
}

fn poly(s: &str) -> Result<RatPoly> {
    parse_poly_any(s).with_context(|| format!("cannot parse polynomial {s:?}"))
}

fn element(min: &str, expr: &str) -> Result<AlgebraicElement> {
    Ok(AlgebraicElement::new(poly(min)?, poly(expr)?)?)
}

fn read_matrix(path: &Path) -> Result<ValuationMatrix> {
    let data = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&data).with_context(|| format!("invalid valuation matrix in {}", path.display()))
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn mechanism_text(m: &Mechanism) -> String {
    match m {
        Mechanism::IndexOne => "index one for every member".into(),
        Mechanism::ExplicitGenerator { generator } => format!("generator ({})/{}", generator.f(), generator.d()),
        Mechanism::PseudoDivergentToZero => "pseudo-divergent valuations tending to 0".into(),
        Mechanism::IndexCoprime => "members with index prime to p".into(),
    }
}

fn hint_text(h: &BreadthHint) -> String {
    match h {
        BreadthHint::WholeRing => "whole valuation ring".into(),
        BreadthHint::MaximalIdeal => "maximal ideal".into(),
        BreadthHint::ProperBall(g) => format!("ball of radius {g}"),
        BreadthHint::Fractional => "fractional".into(),
    }
}

fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Index { min, trial_bound, rho_iterations } => {
            let f = poly(min)?;
            let mut budget = FactorBudget { seed: cli.seed, ..FactorBudget::default() };
            if let Some(b) = trial_bound {
                budget.trial_bound = *b;
            }
            if let Some(r) = rho_iterations {
                budget.rho_iterations = *r;
            }
            let report = index_one_certificate_with(&f, budget)?;
            let mut text = format!("min poly      {}\ndiscriminant  {}\n", report.min_poly, report.disc);
            for t in &report.tested_primes {
                let w = t.witness.as_ref().map(|w| format!(" (witness {w})")).unwrap_or_default();
                let _ = writeln!(text, "p = {:<10} divides index: {}{w}", t.prime, t.divides);
            }
            if !report.untested_primes.is_empty() {
                let _ = writeln!(text, "untested      {}", report.untested_primes.join(", "));
            }
            let _ = writeln!(text, "index is one  {:?}", report.index_is_one);
            Ok(output(to_json(&report), text))
        }
        Command::Psi { prime, n, check_lcm, min, expr } => {
            let g = psi(*prime, *n)?;
            let mut j = json!({"prime": prime, "n": n, "psi": g.to_string(), "degree": g.deg()});
            let mut text = format!("psi({prime}, {n}) = {g}\n");
            if *check_lcm {
                let ok = psi_lcm_oracle(*prime, *n)?;
                j["lcm_matches"] = json!(ok);
                let _ = writeln!(text, "equals lcm of monic polynomials of degree <= {n} mod {prime}: {ok}");
            }
            if let Some(min) = min {
                let e = element(min, expr)?;
                let member = psi_membership_check(*prime, *n, &e)?;
                j["element"] = json!(e.to_string());
                j["integral"] = json!(member);
                let _ = writeln!(text, "psi(e)/{prime} integral at {e}: {member}");
            }
            Ok(output(j, text))
        }
        Command::Integral { min, expr, den } => {
            let e = element(min, expr)?;
            let integral = is_integral_value(&e, *den)?;
            let cp = e.scaled(&ivp_core::val::parse_rational(&format!("1/{den}"))?).char_poly();
            let j = json!({"element": e.to_string(), "den": den, "char_poly": cp.to_string(), "integral": integral,
                           "certificate": to_json(e.certificate())});
            Ok(output(j, format!("value/{den} has characteristic polynomial {cp}\nintegral: {integral}\n")))
        }
        Command::Classify { matrix, greedy } => {
            let m = read_matrix(matrix)?;
            let r = classify_prefix(&m);
            let mut j = to_json(&r);
            let gauge: Vec<String> = r.gauge.iter().map(Val::to_string).collect();
            let mut text = format!("kind     {:?}\ngauge    [{}]\n", r.kind, gauge.join(", "));
            if let Some(b) = &r.breadth {
                let _ = writeln!(text, "breadth  {b} ({})", hint_text(r.breadth_ideal_hint.as_ref().expect("hint")));
            }
            let _ = writeln!(text, "note     {}", r.note);
            if *greedy {
                let sub = greedy_divergent_subsequence(&m);
                j["greedy_divergent_subsequence"] = json!(sub);
                let _ = writeln!(text, "greedy pseudo-divergent subsequence (heuristic): {sub:?}");
            }
            Ok(output(j, text))
        }
        Command::Cover { matrix, delta, crosscheck } => {
            let m = read_matrix(matrix)?;
            let mut j = json!({});
            let mut text = String::new();
            let mut ok = true;
            if let Some(delta) = delta {
                let d: Val = delta.parse()?;
                let t = ball_cover(&m, &d)?;
                let classes = residue_classes(&m, &d)?;
                let _ = writeln!(text, "minimal cover at {d}: {t:?} (size {})", t.len());
                let _ = writeln!(text, "residue classes: {classes:?}");
                j["delta"] = json!(d.to_string());
                j["cover"] = json!(t);
                j["classes"] = json!(classes);
            }
            if *crosscheck {
                let c = cover_class_crosscheck(&m)?;
                for g in &c.grid {
                    let _ = writeln!(text, "gamma {:<8} cover {:<3} classes {:<3} {}", g.gamma.to_string(), g.cover_size, g.class_count, if g.agree { "ok" } else { "MISMATCH" });
                }
                let _ = writeln!(text, "all ok: {}", c.all_ok);
                ok = c.all_ok;
                j["crosscheck"] = to_json(&c);
            }
            if delta.is_none() && !crosscheck {
                return Err(Error::Usage("cover needs --delta or --crosscheck".into()).into());
            }
            Ok(Output { json: j, text, ok })
        }
        Command::Family { kind, p, n, c, d, len, prime, crosscheck, budget } => {
            let kind = match kind {
                KindArg::RootsOfUnityPPower => FamilyKind::RootsOfUnityPPower { p: *p },
                KindArg::RootsOfUnityPrimes => FamilyKind::RootsOfUnityPrimes,
                KindArg::NthRootTower => FamilyKind::NthRootTower { p: *p, n: *n },
                KindArg::PrimeProductRadicals => FamilyKind::PrimeProductRadicals,
                KindArg::FcnFamily => FamilyKind::FcnFamily { c: *c },
                KindArg::ScaledRing => FamilyKind::ScaledRing { d: *d },
            };
            let sample = make_family_seeded(&kind, *len, cli.seed)?;
            let verdict = family_verdict(&sample, *prime)?;
            let mut text = format!("{} ({} members)\n{}\n", kind.name(), sample.elements.len(), sample.provenance);
            for (i, (e, label)) in sample.elements.iter().zip(&sample.labels).enumerate() {
                let v = sample.element_valuation(i, *prime).map(|v| v.to_string()).unwrap_or_else(|| "?".into());
                let _ = writeln!(text, "  {label:<28} v_{prime} = {v:<8} {}", e.min_poly());
            }
            match &verdict.classification {
                Some(r) => {
                    let gauge: Vec<String> = r.gauge.iter().map(Val::to_string).collect();
                    let _ = writeln!(
                        text,
                        "at {prime}, from member {}: {:?}, gauge [{}], {}",
                        verdict.tail_start.unwrap_or(0),
                        r.kind,
                        gauge.join(", "),
                        r.note
                    );
                }
                None => {
                    let _ = writeln!(text, "at {prime}: no closed-form pairwise valuations");
                }
            }
            let _ = writeln!(text, "conclusion: {:?} via {}", verdict.conclusion, mechanism_text(&verdict.mechanism));
            let _ = writeln!(text, "check: {:?}, {}", verdict.check.status, verdict.check.detail);
            let mut j = json!({"sample": to_json(&sample), "verdict": to_json(&verdict)});
            let mut ok = verdict.check.status != ivp_core::verify::Status::Fail;
            if *crosscheck {
                let cc = crosscheck_family(&sample, *prime, *budget)?;
                let _ = writeln!(
                    text,
                    "crosscheck at {prime}: {} element and {} pair formulas recomputed, {} pairs over budget, all agree: {}",
                    cc.elements.len(),
                    cc.pairs.len(),
                    cc.skipped,
                    cc.all_agree
                );
                ok &= cc.all_agree;
                j["crosscheck"] = to_json(&cc);
            }
            Ok(Output { json: j, text, ok })
        }
        Command::Closure { gens, min, expr } => {
            let data = std::fs::read_to_string(gens).with_context(|| format!("cannot read {}", gens.display()))?;
            let gens: Vec<IvpGenerator> =
                serde_json::from_str(&data).with_context(|| format!("invalid generator list in {}", gens.display()))?;
            let e = element(min, expr)?;
            let mut per = Vec::new();
            let mut text = String::new();
            for g in &gens {
                let inside = in_sfd(&e, g)?;
                let _ = writeln!(text, "S({}, {}): {inside}", g.f(), g.d());
                per.push(json!({"f": g.f().to_string(), "d": g.d(), "member": inside}));
            }
            let member = per.iter().all(|v| v["member"] == json!(true));
            let _ = writeln!(text, "{e} in closure: {member}");
            Ok(output(json!({"element": e.to_string(), "generators": per, "member": member}), text))
        }
        Command::Zwitness { min, expr, kmax } => {
            let e = element(min, expr)?;
            let w = z_closure_witness(&e, *kmax)?;
            let text = match &w {
                Some(w) => format!("binomial(X, {}) is not integral at {e}\ncharacteristic polynomial {}\n", w.k, w.char_poly),
                None => format!("inconclusive: binomial(X, k) integral at {e} for all k <= {kmax}\n"),
            };
            let j = json!({"element": e.to_string(), "kmax": kmax, "witness": w.as_ref().map(to_json),
                           "result": if w.is_some() { "outside" } else { "inconclusive" }});
            Ok(output(j, text))
        }
        Command::Suite { filter, out } => {
            let report = run_example_suite(filter.as_deref(), cli.jobs, cli.seed)?;
            let j = to_json(&report);
            let text = report.to_text();
            if let Some(dir) = out {
                std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
                let pretty = serde_json::to_string_pretty(&j)? + "\n";
                std::fs::write(dir.join("report.json"), pretty)?;
                std::fs::write(dir.join("report.txt"), &text)?;
            }
            Ok(Output { json: j, text, ok: report.passed() })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("json"));
            } else {
                print!("{}", out.text);
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            let usage = matches!(err.downcast_ref::<Error>(), Some(Error::Usage(_) | Error::Parse(_)));
            ExitCode::from(if usage { 2 } else { 1 })
        }
    }
}
