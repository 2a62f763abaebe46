use approx::assert_relative_eq;
use infoenergy::expfam::{finite_difference_gradient, InvariantTolerances};
use infoenergy::families::{self, default_entries, mvn_source_coords, CatalogEntry};
use infoenergy::measures;
use infoenergy::oracle::{self, Moment, QuadratureConfig};
use infoenergy::{check_combination, to_natural, Density, Error, NaturalParam};
use nalgebra::DMatrix;

fn grid(entry: &CatalogEntry) -> Vec<Density> {
    entry
        .default_grid
        .iter()
        .map(|s| Density::from_source(entry.descriptor.clone(), s).unwrap())
        .collect()
}

#[test]
fn densities_integrate_to_one() {
    let tol = InvariantTolerances::default();
    let cfg = QuadratureConfig::default();
    for entry in default_entries() {
        for p in grid(&entry) {
            let r = oracle::integrate_density(&p, &cfg).unwrap();
            assert!(
                (r.value - 1.0).abs() < tol.normalization_rtol,
                "{} {:?}: {}",
                entry.descriptor.id(),
                p.coords(),
                r.value
            );
        }
    }
}

#[test]
fn gradient_matches_finite_differences() {
    let tol = InvariantTolerances::default();
    for entry in default_entries() {
        let fam = entry.descriptor.as_ref();
        for p in grid(&entry) {
            let g = fam.grad_log_normalizer(p.coords());
            let fd = finite_difference_gradient(fam, p.coords(), &tol);
            for (a, b) in g.iter().zip(&fd) {
                assert!(
                    (a - b).abs() <= tol.gradient_rtol * a.abs().max(1e-8),
                    "{} {:?}: {g:?} vs {fd:?}",
                    fam.id(),
                    p.coords()
                );
            }
        }
    }
}

#[test]
fn gradient_is_the_mean_of_the_sufficient_statistic() {
    let tol = InvariantTolerances::default();
    let cfg = QuadratureConfig::default();
    for entry in default_entries() {
        let fam = entry.descriptor.as_ref();
        for p in grid(&entry) {
            let eta = fam.grad_log_normalizer(p.coords());
            let m = oracle::moment_expectation(&p, Moment::SufficientStat, &cfg).unwrap();
            let scale = eta.iter().fold(0.0_f64, |a, b| a.max(b.abs()));
            for (e, r) in eta.iter().zip(&m) {
                // coordinates that vanish by symmetry are compared against the vector's scale
                assert!(
                    (e - r.value).abs() <= tol.mean_rtol * e.abs().max(1e-6 * scale),
                    "{} {:?}: {eta:?} vs {}",
                    fam.id(),
                    p.coords(),
                    r.value
                );
            }
        }
    }
}

#[test]
fn carrier_expectation_is_one_without_carrier() {
    let cfg = QuadratureConfig::default();
    for entry in default_entries() {
        let fam = entry.descriptor.as_ref();
        if !fam.has_zero_carrier() {
            continue;
        }
        for p in grid(&entry) {
            assert_eq!(
                fam.carrier_expectation(p.coords(), &Default::default())
                    .value,
                1.0
            );
            let m = oracle::moment_expectation(&p, Moment::ExpCarrier, &cfg).unwrap();
            assert_relative_eq!(m[0].value, 1.0, max_relative = 1e-9);
        }
    }
}

#[test]
fn natural_domain_is_midpoint_convex() {
    for entry in default_entries() {
        let fam = entry.descriptor.as_ref();
        let ds = grid(&entry);
        for p in &ds {
            for q in &ds {
                assert!(check_combination(fam, &[p.theta(), q.theta()], &[0.5, 0.5]).unwrap());
            }
        }
    }
}

#[test]
fn source_and_canonical_densities_agree() {
    for entry in default_entries() {
        let fam = entry.descriptor.as_ref();
        let support = fam.support();
        for s in &entry.default_grid {
            let theta = to_natural(fam, &entry.source(s.clone()).unwrap()).unwrap();
            assert!(fam.in_domain(theta.coords()));
            let mut xs = fam.omega_points();
            xs.extend(support_samples(&support));
            for x in xs {
                let a = fam.source_log_density(s, &x);
                let b = fam.log_density(theta.coords(), &x);
                assert!(
                    (a - b).abs() <= 1e-10 * a.abs().max(1.0),
                    "{} {s:?} at {x:?}: {a} vs {b}",
                    fam.id()
                );
            }
        }
    }
}

fn support_samples(s: &infoenergy::Support) -> Vec<Vec<f64>> {
    use infoenergy::Support::*;
    match *s {
        RealLine { dim } => [-3.0, -0.7, 0.4, 2.5]
            .iter()
            .map(|&v| (0..dim).map(|i| v + 0.3 * i as f64).collect())
            .collect(),
        HalfLine { lower, .. } => [0.01, 0.5, 3.0, 20.0]
            .iter()
            .map(|v| vec![lower + v])
            .collect(),
        Interval { lower, upper } => [0.01, 0.3, 0.9, 0.999]
            .iter()
            .map(|t| vec![lower + t * (upper - lower)])
            .collect(),
        NonNegativeIntegers => [0.0, 3.0, 7.0, 40.0].iter().map(|&v| vec![v]).collect(),
    }
}

#[test]
fn worked_natural_parameters() {
    let e = families::exponential();
    assert_eq!(
        to_natural(e.descriptor.as_ref(), &e.source(vec![3.0]).unwrap())
            .unwrap()
            .coords(),
        &[3.0]
    );
    let n = families::normal();
    assert_eq!(
        to_natural(n.descriptor.as_ref(), &n.source(vec![0.0, 1.0]).unwrap())
            .unwrap()
            .coords(),
        &[0.0, -0.5]
    );
    let p = families::poisson();
    assert_eq!(
        to_natural(p.descriptor.as_ref(), &p.source(vec![1.0]).unwrap())
            .unwrap()
            .coords(),
        &[0.0]
    );
}

#[test]
fn combination_checks() {
    let g = families::gamma();
    let fam = g.descriptor.as_ref();
    let theta = to_natural(fam, &g.source(vec![0.4, 1.0]).unwrap()).unwrap();
    assert!(!check_combination(fam, &[&theta], &[2.0]).unwrap());

    let n = families::normal();
    let theta = to_natural(n.descriptor.as_ref(), &n.source(vec![1.5, 0.2]).unwrap()).unwrap();
    assert!(check_combination(n.descriptor.as_ref(), &[&theta], &[2.0]).unwrap());

    let p = families::poisson();
    let fam = p.descriptor.as_ref();
    let a = NaturalParam::new(fam, vec![-3.0]).unwrap();
    let b = NaturalParam::new(fam, vec![5.0]).unwrap();
    assert!(check_combination(fam, &[&a, &b], &[-7.5, 0.25]).unwrap());
}

#[test]
fn invalid_source_parameters_are_rejected() {
    let cases: [(CatalogEntry, Vec<f64>); 5] = [
        (families::exponential(), vec![0.0]),
        (families::normal(), vec![0.0, -1.0]),
        (families::gamma(), vec![1.0, 0.0]),
        (families::beta(), vec![-1.0, 1.0]),
        (families::poisson(), vec![f64::NAN]),
    ];
    for (entry, s) in cases {
        assert!(matches!(
            entry.source(s),
            Err(Error::InvalidSourceParam { .. })
        ));
    }
    let m = families::mvn(2).unwrap();
    let bad = mvn_source_coords(
        &[0.0, 0.0],
        &DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]),
    );
    assert!(matches!(m.source(bad), Err(Error::NotPositiveDefinite)));
}

fn energy_of(entry: &CatalogEntry, s: &[f64]) -> infoenergy::Result<f64> {
    Ok(measures::energy(&Density::from_source(entry.descriptor.clone(), s)?)?.value)
}

#[test]
fn gamma_examples() {
    let g = families::gamma();
    assert_relative_eq!(
        energy_of(&g, &[1.0, 1.0]).unwrap(),
        0.5,
        max_relative = 1e-12
    );
    assert_relative_eq!(
        energy_of(&g, &[2.0, 1.0]).unwrap(),
        0.25,
        max_relative = 1e-12
    );
    // unit shape is the exponential with rate 1/β
    let e = families::exponential();
    assert_relative_eq!(
        energy_of(&g, &[1.0, 4.0]).unwrap(),
        energy_of(&e, &[0.25]).unwrap(),
        max_relative = 1e-12
    );
    for alpha in [0.5, 0.4, 0.1] {
        assert!(matches!(
            energy_of(&g, &[alpha, 1.0]),
            Err(Error::DomainViolation(_))
        ));
    }
}

#[test]
fn beta_examples() {
    let b = families::beta();
    assert_relative_eq!(
        energy_of(&b, &[1.0, 1.0]).unwrap(),
        1.0,
        max_relative = 1e-12
    );
    assert_relative_eq!(
        energy_of(&b, &[2.0, 2.0]).unwrap(),
        1.2,
        max_relative = 1e-12
    );
    for s in &b.default_grid {
        assert!(energy_of(&b, s).unwrap() >= 1.0);
    }
    for s in [[0.5, 2.0], [2.0, 0.5], [0.3, 0.3]] {
        assert!(matches!(energy_of(&b, &s), Err(Error::DomainViolation(_))));
    }
}

#[test]
fn pareto_examples() {
    let one = families::pareto(1.0).unwrap();
    assert_relative_eq!(
        energy_of(&one, &[1.0]).unwrap(),
        1.0 / 3.0,
        max_relative = 1e-12
    );
    let two = families::pareto(2.0).unwrap();
    assert_relative_eq!(
        energy_of(&two, &[1.0]).unwrap(),
        1.0 / 6.0,
        max_relative = 1e-12
    );
    let p = Density::from_source(one.descriptor.clone(), &[2.5]).unwrap();
    let o = oracle::integrate_product(&p, &p, &QuadratureConfig::default()).unwrap();
    assert_relative_eq!(
        o.value,
        energy_of(&one, &[2.5]).unwrap(),
        max_relative = 1e-7
    );
}

#[test]
fn lognormal_examples() {
    let l = families::lognormal();
    let pi = std::f64::consts::PI;
    assert_relative_eq!(
        energy_of(&l, &[0.0, 1.0]).unwrap(),
        0.25_f64.exp() / (2.0 * pi.sqrt()),
        max_relative = 1e-12
    );
    for sigma in [0.3, 1.0, 2.0] {
        assert_relative_eq!(
            energy_of(&l, &[sigma * sigma / 4.0, sigma]).unwrap(),
            1.0 / (2.0 * sigma * pi.sqrt()),
            max_relative = 1e-12
        );
    }
    let p = Density::from_source(l.descriptor.clone(), &[1.0, 0.5]).unwrap();
    let o = oracle::integrate_product(&p, &p, &QuadratureConfig::default()).unwrap();
    assert_relative_eq!(
        o.value,
        energy_of(&l, &[1.0, 0.5]).unwrap(),
        max_relative = 1e-7
    );
}

#[test]
fn mvn_examples() {
    let m2 = families::mvn(2).unwrap();
    let id = DMatrix::<f64>::identity(2, 2);
    for mu in [[0.0, 0.0], [3.0, -1.0]] {
        let e = energy_of(&m2, &mvn_source_coords(&mu, &id)).unwrap();
        assert_relative_eq!(e, 1.0 / (4.0 * std::f64::consts::PI), max_relative = 1e-12);
    }
    let p =
        Density::from_source(m2.descriptor.clone(), &mvn_source_coords(&[0.0, 0.0], &id)).unwrap();
    assert!(measures::cauchy_schwarz(&p, &p).unwrap().value.abs() < 1e-12);

    let m1 = families::mvn(1).unwrap();
    let n = families::normal();
    for sigma in [0.1, 0.5, 1.0, 3.0, 20.0] {
        let var = sigma * sigma;
        assert_relative_eq!(
            energy_of(&m1, &[0.7, var]).unwrap(),
            energy_of(&n, &[0.7, var]).unwrap(),
            max_relative = 1e-12
        );
    }
}

#[test]
fn mvn_oracle_in_three_dimensions() {
    let m3 = families::mvn(3).unwrap();
    let cov = DMatrix::from_row_slice(3, 3, &[1.0, 0.3, 0.1, 0.3, 2.0, -0.2, 0.1, -0.2, 0.5]);
    let p = Density::from_source(
        m3.descriptor.clone(),
        &mvn_source_coords(&[0.2, -0.1, 0.4], &cov),
    )
    .unwrap();
    let cfg = QuadratureConfig {
        rel_tol: 1e-9,
        ..QuadratureConfig::default()
    };
    let o = oracle::integrate_product(&p, &p, &cfg).unwrap();
    assert_relative_eq!(
        o.value,
        measures::energy(&p).unwrap().value,
        max_relative = 1e-7
    );
}

#[test]
fn poisson_examples() {
    let p = families::poisson();
    let fam = p.descriptor.as_ref();
    assert_relative_eq!(
        energy_of(&p, &[1.0]).unwrap(),
        0.3085083225,
        max_relative = 1e-9
    );
    let tiny = to_natural(fam, &p.source(vec![1e-8]).unwrap()).unwrap();
    assert!(
        (fam.carrier_expectation(tiny.coords(), &Default::default())
            .value
            - 1.0)
            .abs()
            < 1e-6
    );
    // E_{p_1}[1/x!] at 2θ with λ = 1
    let d = Density::from_source(p.descriptor.clone(), &[1.0]).unwrap();
    let m =
        oracle::moment_expectation(&d, Moment::ExpCarrier, &QuadratureConfig::default()).unwrap();
    let direct: f64 = (0..30u32)
        .map(|i| {
            let f: f64 = (1..=i).map(f64::from).product();
            (-1.0_f64).exp() / (f * f)
        })
        .sum();
    assert_relative_eq!(m[0].value, direct, max_relative = 1e-12);
    assert!((m[0].value - 0.8386).abs() < 5e-5);
}

#[test]
fn special_function_kit_identities() {
    use infoenergy::special::SpecialFunctionKit;
    let kit = SpecialFunctionKit;
    assert_relative_eq!(
        kit.log_beta(2.0, 0.5),
        (4.0_f64 / 3.0).ln(),
        max_relative = 1e-13
    );
    assert_relative_eq!(
        kit.log_gamma(0.5),
        std::f64::consts::PI.sqrt().ln(),
        max_relative = 1e-13
    );
    assert_relative_eq!(kit.digamma(1.0), -0.5772156649015329, max_relative = 1e-13);
}
