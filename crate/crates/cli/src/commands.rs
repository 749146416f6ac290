use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use dominion::gallery::{example1, example1_stated_norm, example2, remark_lp_counterexample, Example1Params};
use dominion::random::{
    random_commuting_lattice_pair, random_commuting_quadruple_with, random_dominated_pair_with, GeneratorConfig,
};
use dominion::rational::{int, ratio, to_f64};
use dominion::theorems::{
    check_corollary_2_2, check_lemma_3_2, check_theorem_2_1, check_theorem_2_3, find_epsilon_certificate,
    zero_two_trace, CommutingFamily, DominatedPair, SearchCaps,
};
use dominion::{format_decimal, format_rational, lp_operator_norm, MatrixOperator, Rational, Report, Verdict};
use serde_json::json;

use crate::bundle::OperatorBundle;
use crate::{CheckKind, ExampleKind, RangeArgs, SweepKind, EXIT_FALSIFIED, EXIT_UNMET, EXIT_VERIFIED};

const DEFAULT_N_MAX: u64 = 50;

fn exit_for(verdict: Verdict) -> u8 {
    match verdict {
        Verdict::Verified => EXIT_VERIFIED,
        Verdict::Falsified | Verdict::Exhausted => EXIT_FALSIFIED,
        Verdict::HypothesisUnmet => EXIT_UNMET,
    }
}

fn print_report(echo: &str, report: &Report, extra: Option<serde_json::Value>, json: bool) {
    if json {
        let mut out = json!({ "command": echo, "report": report });
        if let Some(extra) = extra {
            out["details"] = extra;
        }
        println!("{}", serde_json::to_string_pretty(&out).expect("reports serialize"));
    } else {
        println!("command: {echo}");
        println!("{report}");
    }
}

/// `S1, S2, …` up to the first missing index.
fn family_from(bundle: &OperatorBundle, n0: u64) -> Result<CommutingFamily> {
    let mut pairs = Vec::new();
    for i in 1.. {
        let Some(s) = bundle.role(&format!("S{i}")) else { break };
        let t = bundle.require(&format!("T{i}"))?;
        pairs.push(DominatedPair::new(s, t).with_context(|| format!("pair {i}"))?);
    }
    if pairs.is_empty() {
        bundle.require("S1")?;
    }
    let exponents = vec![n0; pairs.len()];
    Ok(CommutingFamily::new(pairs, exponents)?)
}

pub fn check(kind: CheckKind, path: &Path, range: &RangeArgs, json: bool, echo: &str) -> Result<u8> {
    let bundle = OperatorBundle::load(path)?;
    let params = &bundle.params;
    let n0 = range.n0.or(params.n0).unwrap_or(1);
    let m = range.m.or(params.m).unwrap_or(0);
    let k = range.k.or(params.k).unwrap_or(1);
    let n_max = range.n_max.unwrap_or(DEFAULT_N_MAX.max(n0));

    let (report, extra) = match kind {
        CheckKind::Thm21 => {
            let [s1, s2, t1, t2] = ["S1", "S2", "T1", "T2"].map(|r| bundle.require(r));
            (check_theorem_2_1(&t1?, &t2?, &s1?, &s2?, n0, n_max)?, None)
        }
        CheckKind::Cor22 => {
            let (s, t) = (bundle.require("S")?, bundle.require("T")?);
            (check_corollary_2_2(&bundle.z_or_identity(), &s, &t, n0, n_max)?, None)
        }
        CheckKind::Thm23 => {
            let family = match family_from(&bundle, n0) {
                Ok(f) => f,
                Err(e) if e.downcast_ref::<dominion::theorems::BundleError>().is_some_and(is_unmet) => {
                    println!("command: {echo}");
                    println!("hypotheses fail: {e:#}");
                    println!("verdict: {}", Verdict::HypothesisUnmet);
                    return Ok(EXIT_UNMET);
                }
                Err(e) => return Err(e),
            };
            let upper = vec![n_max; family.len()];
            (check_theorem_2_3(&family, &upper)?, None)
        }
        CheckKind::Lemma32 => {
            let t = bundle.require("T")?;
            let out = check_lemma_3_2(&bundle.z_or_identity(), &t, m, k)?;
            let extra = json!({
                "premise_norm": format_rational(&out.premise_norm),
                "conclusion_norm": format_rational(&out.conclusion_norm),
                "premise_holds": out.premise_holds,
                "conclusion_holds": out.conclusion_holds,
            });
            if !json {
                println!(
                    "‖Z(T^(m+k) − T^m)‖ = {}, ‖Z(T^(m+k) − T^(m+k) ∧ T^m)‖ = {}",
                    format_rational(&out.premise_norm),
                    format_rational(&out.conclusion_norm)
                );
            }
            (out.report, Some(extra))
        }
        CheckKind::Zerotwo => {
            let t = bundle.require("T")?;
            let epsilon = range.epsilon.clone().or(params.epsilon.clone()).unwrap_or(ratio(1, 100));
            let defaults = SearchCaps::default();
            let caps = SearchCaps {
                max_d: range.d.unwrap_or(defaults.max_d),
                max_n0: range.n_max.unwrap_or(defaults.max_n0),
            };
            let search = find_epsilon_certificate(&bundle.z_or_identity(), &t, m, k, &epsilon, caps)?;
            let extra = serde_json::to_value(&search.certificate).expect("certificates serialize");
            (search.to_report(), Some(extra))
        }
    };
    print_report(echo, &report, extra, json);
    Ok(exit_for(report.verdict))
}

fn is_unmet(e: &dominion::theorems::BundleError) -> bool {
    matches!(e, dominion::theorems::BundleError::Unmet(_))
}

/// The CSV text for rows `1 ≤ n ≤ n_max`.
pub fn trace_csv(z: &MatrixOperator, t: &MatrixOperator, k: u64, d: u64, n_max: u64) -> Result<String> {
    let trace = zero_two_trace(z, t, k, d, n_max)?;
    let mut csv = String::from("n,norm_exact,norm_decimal\n");
    for (n, norm) in trace.records.iter().filter(|(n, _)| *n >= 1) {
        writeln!(csv, "{n},{},{}", format_rational(norm), format_decimal(norm)).unwrap();
    }
    Ok(csv)
}

pub fn trace(path: &Path, k: u64, d: u64, n_max: u64, out: Option<&Path>) -> Result<u8> {
    let bundle = OperatorBundle::load(path)?;
    let t = bundle.require("T")?;
    let csv = trace_csv(&bundle.z_or_identity(), &t, k, d, n_max)?;
    match out {
        Some(out) => std::fs::write(out, csv).with_context(|| format!("writing {}", out.display()))?,
        None => print!("{csv}"),
    }
    Ok(EXIT_VERIFIED)
}

struct Regression {
    lines: Vec<String>,
    mismatches: usize,
}

impl Regression {
    fn new() -> Self {
        Self {
            lines: Vec::new(),
            mismatches: 0,
        }
    }

    fn record(&mut self, line: String, matches: bool) {
        if !matches {
            self.mismatches += 1;
        }
        self.lines.push(format!("{line}  {}", if matches { "MATCH" } else { "MISMATCH" }));
    }

    fn exact(&mut self, label: &str, computed: &Rational, stated: &Rational, stated_text: &str) {
        self.record(
            format!("{label} = {} (stated {stated_text})", format_rational(computed)),
            computed == stated,
        );
    }
}

pub fn example(
    which: ExampleKind,
    u: Rational,
    v: Rational,
    lambda: Rational,
    p: f64,
    out: Option<&Path>,
) -> Result<u8> {
    let mut reg = Regression::new();
    let bundle = match which {
        ExampleKind::One => {
            let e = example1(&Example1Params::new(u, v, lambda)?)?;
            let zst = e.z.compose(&e.s.try_sub(&e.t)?)?.operator_norm_l1();
            if e.params.on_contractive_boundary() && e.params.dominated() {
                let stated = example1_stated_norm(&e.params.u, &e.params.lambda);
                reg.exact("‖Z(S − T)‖", &zst, &stated, &format!("(1 + u(1 − 2λ))/2 = {}", format_rational(&stated)));
            } else {
                reg.lines.push("the stated closed form needs u + v = 1 and λ ≤ 1/2; comparing with the general form".into());
                reg.exact(
                    "‖Z(S − T)‖",
                    &zst,
                    &e.closed_form.z_s_minus_t,
                    &format_rational(&e.closed_form.z_s_minus_t),
                );
            }
            reg.exact("‖Z‖", &e.z.operator_norm_l1(), &e.closed_form.z, "u + v");
            reg.exact("‖S‖", &e.s.operator_norm_l1(), &e.closed_form.s, "1/1");
            reg.exact("‖T‖", &e.t.operator_norm_l1(), &e.closed_form.t, "λ");
            let mut b = OperatorBundle::new(e.s.space())
                .with_operator("Z", &e.z)
                .with_operator("S", &e.s)
                .with_operator("T", &e.t);
            b.params.n0 = Some(1);
            b
        }
        ExampleKind::Two => {
            let (s, t) = example2();
            reg.exact("‖S − T‖", &s.distance_l1(&t)?, &int(1), "1/1");
            reg.exact("‖S² − T²‖", &s.power(2).distance_l1(&t.power(2))?, &ratio(15, 18), "15/18");
            let mut b = OperatorBundle::new(s.space()).with_operator("S", &s).with_operator("T", &t);
            b.params.n0 = Some(2);
            b
        }
        ExampleKind::Lp => {
            const TOL: f64 = 1e-9;
            let (s, t) = remark_lp_counterexample();
            let d1 = s.try_sub(&t)?;
            let d2 = s.power(2).try_sub(&t.power(2))?;
            let one = lp_operator_norm(&d1, p, 1e-12)?;
            let two = lp_operator_norm(&d2, p, 1e-12)?;
            reg.record(format!("‖S − T‖_{p} = {one:.12} (stated < 1)"), one < 1.0 - TOL);
            reg.record(
                format!("‖S² − T²‖_{p} = {two:.12} (stated 1, tolerance {TOL:e})"),
                (two - 1.0).abs() <= TOL,
            );
            if p == 2.0 {
                let oracle = spectral_norm_2x2(&d1);
                reg.record(
                    format!("‖S − T‖_2 against the largest singular value {oracle:.12} (tolerance {TOL:e})"),
                    (one - oracle).abs() <= TOL,
                );
            }
            reg.exact("‖S − T‖_1", &d1.operator_norm_l1(), &int(1), "1/1, premise fails in L¹");
            OperatorBundle::new(s.space()).with_operator("S", &s).with_operator("T", &t)
        }
    };

    let text = bundle.emit();
    match out {
        Some(out) => {
            for line in &reg.lines {
                println!("{line}");
            }
            std::fs::write(out, &text).with_context(|| format!("writing {}", out.display()))?;
            println!("bundle written to {}", out.display());
        }
        None => {
            // regression lines as TOML comments keep stdout a valid bundle
            for line in &reg.lines {
                println!("# {line}");
            }
            print!("{text}");
        }
    }
    Ok(if reg.mismatches == 0 { EXIT_VERIFIED } else { EXIT_FALSIFIED })
}

/// Largest singular value of a 2×2 matrix, from the characteristic
/// polynomial of MᵀM. With equal weights it is the L² operator norm.
fn spectral_norm_2x2(m: &MatrixOperator) -> f64 {
    let e: Vec<f64> = m.entries().iter().map(to_f64).collect();
    let (a, b, c, d) = (e[0], e[1], e[2], e[3]);
    let trace = a * a + b * b + c * c + d * d;
    let det = (a * d - b * c).powi(2);
    ((trace + (trace * trace - 4.0 * det).max(0.0).sqrt()) / 2.0).sqrt()
}

pub struct SweepArgs {
    pub count: u64,
    pub seed: u64,
    pub n: Option<usize>,
    pub n_max: Option<u64>,
    pub m: Option<u64>,
    pub k: Option<u64>,
    pub out: PathBuf,
}

enum Instance {
    Verified,
    Unmet,
    Failed(String),
}

pub fn sweep(kind: SweepKind, args: SweepArgs) -> Result<u8> {
    if args.count == 0 {
        bail!("--count must be at least 1");
    }
    let cfg = GeneratorConfig::from_env();
    let (name, n) = match kind {
        SweepKind::Thm12 => ("thm12", args.n.unwrap_or(4)),
        SweepKind::Thm21 => ("thm21", args.n.unwrap_or(3)),
        SweepKind::Lemma32 => ("lemma32", args.n.unwrap_or(4)),
    };
    if n == 0 {
        bail!("--n must be at least 1");
    }

    let (mut verified, mut unmet, mut failed) = (0u64, 0u64, 0u64);
    for seed in args.seed..args.seed + args.count {
        let (bundle, outcome) = match kind {
            SweepKind::Thm12 => {
                let (s, t) = random_dominated_pair_with(seed, n, 0.6, &cfg).into_parts();
                let id = MatrixOperator::identity(s.space());
                let outcome = classify(check_corollary_2_2(&id, &s, &t, 1, args.n_max.unwrap_or(DEFAULT_N_MAX)));
                let mut b = OperatorBundle::new(s.space()).with_operator("S", &s).with_operator("T", &t);
                b.params.n0 = Some(1);
                (b, outcome)
            }
            SweepKind::Thm21 => {
                let q = random_commuting_quadruple_with(seed, n, 2, &cfg);
                let outcome = classify(check_theorem_2_1(&q.t1, &q.t2, &q.s1, &q.s2, 1, args.n_max.unwrap_or(30)));
                let mut b = OperatorBundle::new(q.s1.space())
                    .with_operator("S1", &q.s1)
                    .with_operator("S2", &q.s2)
                    .with_operator("T1", &q.t1)
                    .with_operator("T2", &q.t2);
                b.params.n0 = Some(1);
                (b, outcome)
            }
            SweepKind::Lemma32 => {
                let (z, t) = random_commuting_lattice_pair(seed, n, &cfg);
                let m = args.m.unwrap_or(seed % 3);
                let k = args.k.unwrap_or(1 + seed % 2);
                let outcome = match check_lemma_3_2(&z, &t, m, k) {
                    Ok(r) if r.premise_holds && !r.conclusion_holds => {
                        Instance::Failed(format!("conclusion norm {}", format_rational(&r.conclusion_norm)))
                    }
                    Ok(r) => classify(Ok(r.report)),
                    Err(e) => classify(Err(e)),
                };
                let mut b = OperatorBundle::new(z.space()).with_operator("Z", &z).with_operator("T", &t);
                b.params.m = Some(m);
                b.params.k = Some(k);
                (b, outcome)
            }
        };
        match outcome {
            Instance::Verified => verified += 1,
            Instance::Unmet => unmet += 1,
            Instance::Failed(why) => {
                failed += 1;
                std::fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
                let dump = args.out.join(format!("{name}-seed-{seed}.toml"));
                std::fs::write(&dump, bundle.emit()).with_context(|| format!("writing {}", dump.display()))?;
                println!("seed {seed}: FAILED ({why}); bundle written to {}", dump.display());
            }
        }
    }
    let passed = verified + unmet;
    println!(
        "{name}: {passed}/{} pass ({verified} verified, {unmet} hypothesis unmet, {failed} failed; seeds {}..={}, n = {n})",
        args.count,
        args.seed,
        args.seed + args.count - 1
    );
    Ok(if failed == 0 { EXIT_VERIFIED } else { EXIT_FALSIFIED })
}

fn classify(result: Result<Report, dominion::theorems::EngineError>) -> Instance {
    match result {
        Ok(r) => match r.verdict {
            Verdict::Verified => Instance::Verified,
            Verdict::HypothesisUnmet => Instance::Unmet,
            v @ (Verdict::Falsified | Verdict::Exhausted) => Instance::Failed(v.to_string()),
        },
        Err(e) => Instance::Failed(e.to_string()),
    }
}
