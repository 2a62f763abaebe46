//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero when any criterion fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use common::{entry, random_density, FAMILIES};
use infoenergy::families::{self, beta_table_literal_energy};
use infoenergy::measures;
use infoenergy::oracle;
use infoenergy::{Density, Error, Mixture, QuadratureConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PAIRS_PER_FAMILY: usize = 50;
const MIXTURES_PER_FAMILY: usize = 20;

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn source(name: &str, s: &[f64]) -> Density {
    let e = match name {
        "pareto" => families::pareto(1.0).unwrap(),
        "mvn" => families::mvn(2).unwrap(),
        other => families::by_name(other).unwrap(),
    };
    Density::from_source(e.descriptor, s).unwrap()
}

fn table_reproduction() -> Check {
    let start = Instant::now();
    let cfg = QuadratureConfig::default();
    let mut worst_i: f64 = 0.0;
    let mut worst_h: f64 = 0.0;
    for e in families::default_entries() {
        let p = Density::from_source(e.descriptor.clone(), &e.default_source)
            .map_err(|x| x.to_string())?;
        let id = e.descriptor.id().to_string();
        let i = measures::energy(&p).map_err(|x| x.to_string())?.value;
        let h = measures::shannon_entropy(&p)
            .map_err(|x| x.to_string())?
            .value;
        let oi = oracle::integrate_product(&p, &p, &cfg).map_err(|x| x.to_string())?;
        let oh = oracle::entropy_integral(&p, &cfg).map_err(|x| x.to_string())?;
        let di = rel(i, oi.value);
        let dh = (h - oh.value).abs() / oh.value.abs().max(1.0);
        ensure(di <= 1e-7, || format!("{id}: I {i} vs oracle {}", oi.value))?;
        ensure(dh <= 1e-6, || format!("{id}: H {h} vs oracle {}", oh.value))?;
        worst_i = worst_i.max(di);
        worst_h = worst_h.max(dh);
    }
    let anchors = [
        ("normal", vec![0.0, 1.0], 0.2820947918, Some(1.4189385332)),
        ("exponential", vec![2.0], 1.0, None),
        ("pareto", vec![1.0], 1.0 / 3.0, Some(2.0)),
        (
            "mvn",
            vec![0.0, 0.0, 1.0, 0.0, 0.0, 1.0],
            1.0 / (4.0 * PI),
            None,
        ),
        ("beta", vec![1.0, 1.0], 1.0, None),
    ];
    for (name, s, want_i, want_h) in anchors {
        let p = source(name, &s);
        let i = measures::energy(&p).unwrap().value;
        ensure((i - want_i).abs() <= 1e-10, || {
            format!("{name}: I = {i}, expected {want_i}")
        })?;
        if let Some(want_h) = want_h {
            let h = measures::shannon_entropy(&p).unwrap().value;
            ensure((h - want_h).abs() <= 1e-10, || {
                format!("{name}: H = {h}, expected {want_h}")
            })?;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(5), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "max rel dI {worst_i:.1e}, max dH {worst_h:.1e}, anchors exact to 1e-10, {:.2} s",
        elapsed.as_secs_f64()
    ))
}

fn worked_examples() -> Check {
    let e1 = source("exponential", &[1.0]);
    let e4 = source("exponential", &[4.0]);
    let rho = measures::correlation(&e1, &e4).unwrap().value;
    let cs = measures::cauchy_schwarz(&e1, &e4).unwrap().value;
    ensure((rho - 0.8).abs() <= 1e-10, || {
        format!("exponential rho = {rho}")
    })?;
    ensure((cs - 1.25f64.ln()).abs() <= 1e-10, || {
        format!("exponential D_CS = {cs}")
    })?;
    let n0 = source("normal", &[0.0, 1.0]);
    let n2 = source("normal", &[2.0, 1.0]);
    let ncs = measures::cauchy_schwarz(&n0, &n2).unwrap().value;
    ensure((ncs - 1.0).abs() <= 1e-10, || {
        format!("normal D_CS = {ncs}")
    })?;
    let mut worst: f64 = 0.0;
    for lambda in [0.5f64, 1.0, 2.0] {
        // e^{λ²−2λ} Σ p_{λ²}(x) / x!
        let mu = lambda * lambda;
        let (mut pmf, mut inv_fact, mut sum) = ((-mu).exp(), 1.0, 0.0);
        for x in 0..200u32 {
            sum += pmf * inv_fact;
            pmf *= mu / f64::from(x + 1);
            inv_fact /= f64::from(x + 1);
        }
        let direct = (mu - 2.0 * lambda).exp() * sum;
        let i = measures::energy(&source("poisson", &[lambda]))
            .unwrap()
            .value;
        let d = rel(i, direct);
        ensure(d <= 1e-10, || {
            format!("poisson lambda={lambda}: {i} vs {direct}")
        })?;
        worst = worst.max(d);
    }
    Ok(format!(
        "rho = {rho}, D_CS = ln(5/4), normal D_CS = {ncs}, poisson max rel {worst:.1e}"
    ))
}

fn omega_independence() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checked = 0;
    for name in FAMILIES {
        let e = entry(name);
        if !e.descriptor.has_zero_carrier() {
            continue;
        }
        let omegas = e.descriptor.omega_points();
        ensure(omegas.len() >= 3, || {
            format!("{name}: {} omega points", omegas.len())
        })?;
        for _ in 0..10 {
            let p = random_density(&e, name, &mut rng);
            let q = random_density(&e, name, &mut rng);
            let i = measures::energy(&p).unwrap().value;
            let rho = measures::correlation(&p, &q).unwrap().value;
            let cs = measures::cauchy_schwarz(&p, &q).unwrap().value;
            let mut seen = Vec::new();
            for w in &omegas {
                let wi = measures::energy_omega(&p, w).map_err(|x| x.to_string())?;
                let wr = measures::correlation_omega(&p, &q, w).map_err(|x| x.to_string())?;
                let wc = measures::cauchy_schwarz_omega(&p, &q, w).map_err(|x| x.to_string())?;
                ensure(rel(wi, i) <= 1e-10, || {
                    format!("{name}: I at {w:?} {wi} vs {i}")
                })?;
                ensure(rel(wr, rho) <= 1e-10, || {
                    format!("{name}: rho at {w:?} {wr} vs {rho}")
                })?;
                ensure((wc - cs).abs() <= 1e-10 * cs.abs().max(1e-2), || {
                    format!("{name}: D_CS at {w:?} {wc} vs {cs}")
                })?;
                seen.push((wi, wr, wc));
            }
            for s in &seen[1..] {
                ensure(
                    rel(s.0, seen[0].0) <= 1e-10 && rel(s.1, seen[0].1) <= 1e-10,
                    || format!("{name}: omega values disagree {seen:?}"),
                )?;
            }
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} pairs over 7 families, 3 omega points each"
    ))
}

fn preconditions() -> Check {
    let cases: [(&str, [f64; 2]); 6] = [
        ("gamma", [0.5, 1.0]),
        ("gamma", [0.3, 2.0]),
        ("beta", [0.5, 2.0]),
        ("beta", [2.0, 0.5]),
        ("beta", [0.25, 0.4]),
        ("beta", [0.5, 0.5]),
    ];
    for (name, s) in cases {
        match measures::energy(&source(name, &s)) {
            Err(Error::DomainViolation(_)) => {}
            other => return Err(format!("{name} {s:?}: {other:?}")),
        }
    }
    for (name, s) in [("gamma", [0.51, 1.0]), ("beta", [0.51, 0.51])] {
        measures::energy(&source(name, &s)).map_err(|x| format!("{name} {s:?}: {x}"))?;
    }
    Ok("6 rejected, 2 just inside accepted".into())
}

fn property_suite() -> Check {
    let cfg = QuadratureConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut pairs, mut holder_pairs, mut convexity_pairs) = (0, 0, 0);
    let (mut min_bound, mut worst_convex, mut worst_mix): (f64, f64, f64) =
        (f64::INFINITY, 0.0, 0.0);
    for name in FAMILIES {
        let e = entry(name);
        for _ in 0..PAIRS_PER_FAMILY {
            let p = random_density(&e, name, &mut rng);
            let q = random_density(&e, name, &mut rng);
            let rho = measures::correlation(&p, &q).unwrap().value;
            let cs = measures::cauchy_schwarz(&p, &q).unwrap().value;
            ensure(rho > 0.0 && rho <= 1.0, || format!("{name}: rho = {rho}"))?;
            ensure(cs >= 0.0, || format!("{name}: D_CS = {cs}"))?;
            let swapped = measures::cauchy_schwarz(&q, &p).unwrap().value;
            ensure((cs - swapped).abs() <= 1e-14, || {
                format!("{name}: asymmetric {cs} {swapped}")
            })?;
            let rs = measures::correlation(&q, &p).unwrap().value;
            ensure((rho - rs).abs() <= 1e-14, || {
                format!("{name}: asymmetric rho {rho} {rs}")
            })?;
            let own = measures::cauchy_schwarz(&p, &p).unwrap().value;
            ensure(own.abs() <= 1e-12, || format!("{name}: D_CS(p,p) = {own}"))?;
            if e.descriptor.has_zero_carrier() {
                let h = measures::holder(&p, &q, 2.0, 2.0).unwrap().value;
                ensure((h - cs).abs() <= 1e-12, || {
                    format!("{name}: Holder {h} vs {cs}")
                })?;
                holder_pairs += 1;
            }
            let b = measures::bound_checks(&p, &q, &cfg)
                .map_err(|x| format!("{name} cross-entropy {p:?} {q:?}: {x}"))?;
            ensure(b.holds(), || format!("{name}: bounds {b:?}"))?;
            min_bound = min_bound
                .min(b.entropy_energy_margin)
                .min(b.cross_entropy_margin);
            pairs += 1;

            let sq = oracle::integrate_squared_difference(&p, &q, &cfg)
                .map_err(|x| format!("{name} squared difference {p:?} {q:?}: {x}"))?
                .value;
            let jensen = measures::energy_jensen_divergence(&p, &q).unwrap().value;
            ensure(rel(jensen, 0.25 * sq) <= 1e-6, || {
                format!("{name}: J_I {jensen} vs quarter L2 {}", 0.25 * sq)
            })?;
            let (ip, iq) = (
                measures::energy(&p).unwrap().value,
                measures::energy(&q).unwrap().value,
            );
            for a in [0.25, 0.5, 0.75] {
                let m = Mixture::new(vec![1.0 - a, a], vec![p.clone(), q.clone()]).unwrap();
                let margin = (1.0 - a) * ip + a * iq - measures::mixture_energy(&m).unwrap().value;
                let want = a * (1.0 - a) * sq;
                ensure(margin > 0.0 && rel(margin, want) <= 1e-6, || {
                    format!("{name}: convexity margin {margin} vs {want} at {a}")
                })?;
                worst_convex = worst_convex.max(rel(margin, want));
            }
            convexity_pairs += 1;
        }
        for _ in 0..MIXTURES_PER_FAMILY {
            let comps: Vec<Density> = (0..3).map(|_| random_density(&e, name, &mut rng)).collect();
            let raw: Vec<f64> = (0..3).map(|_| rng.random_range(0.1..1.0)).collect();
            let total: f64 = raw.iter().sum();
            let m = Mixture::new(raw.iter().map(|w| w / total).collect(), comps).unwrap();
            let closed = measures::mixture_energy(&m).unwrap().value;
            let quad = oracle::integrate_mixture_square(&m, &cfg)
                .map_err(|x| format!("{name} mixture square: {x}"))?
                .value;
            ensure(rel(closed, quad) <= 1e-7, || {
                format!("{name}: mixture {closed} vs {quad}")
            })?;
            worst_mix = worst_mix.max(rel(closed, quad));
        }
    }
    Ok(format!(
        "{pairs} pairs, {holder_pairs} Holder pairs, {convexity_pairs} convexity pairs \
         (max rel {worst_convex:.1e}), mixtures max rel {worst_mix:.1e}, min bound margin {min_bound:.3e}"
    ))
}

fn beta_discrepancy() -> Check {
    let cfg = QuadratureConfig::default();
    let p = source("beta", &[2.0, 2.0]);
    let quad = oracle::integrate_product(&p, &p, &cfg)
        .map_err(|x| x.to_string())?
        .value;
    let literal = beta_table_literal_energy(2.0, 2.0);
    let implemented = measures::energy(&p).unwrap().value;
    ensure(rel(quad, 1.2) <= 1e-9, || format!("oracle {quad}"))?;
    ensure(rel(literal, 1.0 / 1080.0) <= 1e-9, || {
        format!("literal {literal}")
    })?;
    ensure(rel(literal, quad) > 0.5, || {
        format!("literal {literal} agrees with {quad}")
    })?;
    ensure(rel(implemented, quad) <= 1e-9, || {
        format!("implemented {implemented} vs {quad}")
    })?;
    Ok(format!(
        "literal {literal:.6e}, oracle {quad}, implemented {implemented}"
    ))
}

fn determinism() -> Check {
    let invocations: [&[&str]; 5] = [
        &["table"],
        &["table", "--output", "csv"],
        &["verify", "--family", "poisson"],
        &[
            "holder",
            "--family",
            "poisson",
            "--params",
            "lambda=1",
            "--params2",
            "lambda=3",
            "--alpha",
            "3",
            "--gamma",
            "0.5",
        ],
        &[
            "rho",
            "--family",
            "mvn",
            "--params",
            "mu=0:0,cov=1:0:0:1",
            "--params2",
            "mu=1:0,cov=2:0.5:0.5:1",
            "--method",
            "oracle",
            "--output",
            "text",
        ],
    ];
    for args in invocations {
        let run = || {
            Command::new(env!("CARGO_BIN_EXE_infoenergy"))
                .args(args)
                .env_remove("INFOENERGY_CONFIG")
                .output()
                .map_err(|e| e.to_string())
        };
        let (a, b) = (run()?, run()?);
        ensure(a.status.success(), || {
            format!("{args:?} exited {:?}", a.status.code())
        })?;
        ensure(a.stdout == b.stdout && a.status == b.status, || {
            format!("{args:?} differs")
        })?;
    }
    Ok(format!(
        "{} commands byte-identical across runs",
        invocations.len()
    ))
}

fn main() {
    let start = Instant::now();
    let criteria: [Criterion; 7] = [
        ("1 table reproduction", table_reproduction),
        ("2 worked examples", worked_examples),
        ("3 omega independence", omega_independence),
        ("4 precondition enforcement", preconditions),
        ("5 property suites", property_suite),
        ("6 beta discrepancy", beta_discrepancy),
        ("7 cli determinism", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("[PASS] {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {name}: {detail}");
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed < Duration::from_secs(60) {
        println!(
            "[PASS] 8 runtime: acceptance suite {:.1} s",
            elapsed.as_secs_f64()
        );
    } else {
        failed += 1;
        println!(
            "[FAIL] 8 runtime: acceptance suite {:.1} s",
            elapsed.as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
