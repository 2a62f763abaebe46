use serde_json::{json, Map, Value};

use infoenergy::families::{self, beta_table_literal_energy, CatalogEntry};
use infoenergy::measures::{self, Diagnostics, MeasureReport, Method as Used, Mixture};
use infoenergy::oracle;
use infoenergy::{to_natural, Density, Error};

use crate::args::{Command, Common, HolderArgs, Method, MixtureArgs, Pair, Single, VerifyArgs};
use crate::config;
use crate::output::{Cell, Report};
use crate::CliError;

pub struct Outcome {
    pub report: Report,
    pub common: Common,
    /// Set when `verify` found a comparison outside its tolerance.
    pub failed: bool,
}

pub fn run(command: &Command) -> Result<Outcome, CliError> {
    let (report, common, failed) = match command {
        Command::Energy(a) => (energy(a)?, a.common.clone(), false),
        Command::Entropy(a) => (entropy(a)?, a.common.clone(), false),
        Command::Cross(a) => (pair_measure("cross", a)?, a.common.clone(), false),
        Command::Rho(a) => (pair_measure("rho", a)?, a.common.clone(), false),
        Command::Csd(a) => (pair_measure("csd", a)?, a.common.clone(), false),
        Command::Jensen(a) => (pair_measure("jensen", a)?, a.common.clone(), false),
        Command::Holder(a) => (holder(a)?, a.pair.common.clone(), false),
        Command::Mixture(a) => (mixture(a)?, a.common.clone(), false),
        Command::Verify(a) => {
            let (report, failed) = verify(a)?;
            (report, a.common.clone(), failed)
        }
        Command::Table(c) => (table(c)?, c.clone(), false),
    };
    Ok(Outcome {
        report,
        common,
        failed,
    })
}

struct Loaded {
    entry: CatalogEntry,
    density: Density,
    source: Vec<f64>,
}

fn load(family: &str, params: &str) -> Result<Loaded, CliError> {
    let named = families::parse_named(params)?;
    let (entry, source) = families::build(family, &named)?;
    let theta = to_natural(entry.descriptor.as_ref(), &source)?;
    let density = Density::new(entry.descriptor.clone(), theta)?;
    Ok(Loaded {
        entry,
        density,
        source: source.coords().to_vec(),
    })
}

fn echo(loaded: &Loaded, raw: &str, show_natural: bool) -> Value {
    let mut m = Map::new();
    m.insert("params".into(), json!(raw));
    m.insert("source".into(), json!(loaded.source));
    if show_natural {
        m.insert("natural".into(), json!(loaded.density.coords()));
    }
    Value::Object(m)
}

fn omega_point(d: &Density, raw: &Option<String>) -> Result<Vec<f64>, CliError> {
    match raw {
        None => Ok(d.family().omega_points().remove(0)),
        Some(s) => s
            .split([':', ','])
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| CliError::Usage(format!("--omega: not a number: {t:?}")))
            })
            .collect(),
    }
}

fn omega_report(value: f64, omega: Vec<f64>) -> MeasureReport {
    MeasureReport {
        value,
        method: Used::OmegaTrick,
        valid: true,
        diagnostics: Diagnostics {
            omega: Some(omega),
            ..Diagnostics::default()
        },
    }
}

fn no_omega(command: &str) -> CliError {
    CliError::Usage(format!(
        "{command}: --method omega is offered for energy, rho, csd and holder"
    ))
}

fn method_name(m: Used) -> &'static str {
    match m {
        Used::ClosedForm => "closed_form",
        Used::OmegaTrick => "omega_trick",
        Used::Oracle => "oracle",
    }
}

/// Assembles the document of a scalar measure.
fn measure_report(
    command: &str,
    family: &str,
    inputs: Value,
    r: &MeasureReport,
    mut fields: Vec<(&'static str, Cell)>,
    extra: Vec<(&'static str, f64)>,
) -> Report {
    let mut doc = Map::new();
    doc.insert("command".into(), json!(command));
    doc.insert("family".into(), json!(family));
    doc.insert("inputs".into(), inputs);
    doc.insert("value".into(), json!(r.value));
    doc.insert("method".into(), json!(method_name(r.method)));
    doc.insert("valid".into(), json!(r.valid));
    doc.insert(
        "diagnostics".into(),
        serde_json::to_value(&r.diagnostics).expect("plain data"),
    );
    for (k, v) in &extra {
        doc.insert((*k).into(), json!(v));
    }
    let mut row = vec![
        ("command", Cell::Text(command.into())),
        ("family", Cell::Text(family.into())),
    ];
    row.append(&mut fields);
    row.push(("value", Cell::Num(r.value)));
    row.push(("method", Cell::Text(method_name(r.method).into())));
    row.push(("valid", Cell::Flag(r.valid)));
    for (k, v) in extra {
        row.push((k, Cell::Num(v)));
    }
    let d = &r.diagnostics;
    row.push(("omega", d.omega.clone().map_or(Cell::Empty, Cell::Nums)));
    row.push((
        "quadrature_error",
        d.quadrature_error.map_or(Cell::Empty, Cell::Num),
    ));
    row.push((
        "series_terms",
        d.series_terms.map_or(Cell::Empty, Cell::Count),
    ));
    Report::single(Value::Object(doc), row)
}

fn energy(a: &Single) -> Result<Report, CliError> {
    let cfg = config::resolve(&a.common)?;
    let l = load(&a.family, &a.params)?;
    let p = &l.density;
    let mut extra = Vec::new();
    let r = match a.method {
        Method::Auto | Method::Closed => {
            let r = measures::energy(p)?;
            extra.push(("renyi2", 0.0 - r.value.ln()));
            extra.push(("vajda2", 1.0 - r.value));
            r
        }
        Method::Omega => {
            let w = omega_point(p, &a.omega)?;
            omega_report(measures::energy_omega(p, &w)?, w)
        }
        Method::Oracle => MeasureReport::from_oracle(&oracle::integrate_product(p, p, &cfg)?),
    };
    let inputs = json!({ "p": echo(&l, &a.params, a.common.show_natural) });
    let fields = vec![("params", Cell::Text(a.params.clone()))];
    Ok(measure_report(
        "energy", &a.family, inputs, &r, fields, extra,
    ))
}

fn entropy(a: &Single) -> Result<Report, CliError> {
    let cfg = config::resolve(&a.common)?;
    let l = load(&a.family, &a.params)?;
    let p = &l.density;
    let r = match a.method {
        Method::Auto | Method::Closed => measures::shannon_entropy(p)?,
        Method::Omega => return Err(no_omega("entropy")),
        Method::Oracle => MeasureReport::from_oracle(&oracle::entropy_integral(p, &cfg)?),
    };
    let inputs = json!({ "p": echo(&l, &a.params, a.common.show_natural) });
    let fields = vec![("params", Cell::Text(a.params.clone()))];
    Ok(measure_report(
        "entropy",
        &a.family,
        inputs,
        &r,
        fields,
        Vec::new(),
    ))
}

/// `∫pq / √(∫p² ∫q²)` by quadrature, with first-order error propagation.
fn pair_measure(command: &str, a: &Pair) -> Result<Report, CliError> {
    let cfg = config::resolve(&a.common)?;
    let l1 = load(&a.family, &a.params)?;
    let l2 = load(&a.family, &a.params2)?;
    let (p, q) = (&l1.density, &l2.density);
    let r = match (command, a.method) {
        ("cross", Method::Auto | Method::Closed) => measures::cross_energy(p, q)?,
        ("cross", Method::Oracle) => {
            MeasureReport::from_oracle(&oracle::integrate_product(p, q, &cfg)?)
        }
        ("rho", Method::Auto | Method::Closed) => measures::correlation(p, q)?,
        ("rho", Method::Omega) => {
            let w = omega_point(p, &a.omega)?;
            omega_report(measures::correlation_omega(p, q, &w)?, w)
        }
        ("rho", Method::Oracle) => MeasureReport::from_oracle(&oracle::correlation(p, q, &cfg)?),
        ("csd", Method::Auto | Method::Closed) => measures::cauchy_schwarz(p, q)?,
        ("csd", Method::Omega) => {
            let w = omega_point(p, &a.omega)?;
            omega_report(measures::cauchy_schwarz_omega(p, q, &w)?, w)
        }
        ("csd", Method::Oracle) => MeasureReport::from_oracle(&oracle::cauchy_schwarz(p, q, &cfg)?),
        ("jensen", Method::Auto | Method::Closed) => measures::energy_jensen_divergence(p, q)?,
        ("jensen", Method::Oracle) => {
            MeasureReport::from_oracle(&oracle::energy_jensen_divergence(p, q, &cfg)?)
        }
        (_, Method::Omega) => return Err(no_omega(command)),
        _ => unreachable!("every command and method is matched above"),
    };
    let inputs = json!({
        "p": echo(&l1, &a.params, a.common.show_natural),
        "q": echo(&l2, &a.params2, a.common.show_natural),
    });
    let fields = vec![
        ("params", Cell::Text(a.params.clone())),
        ("params2", Cell::Text(a.params2.clone())),
    ];
    Ok(measure_report(
        command,
        &a.family,
        inputs,
        &r,
        fields,
        Vec::new(),
    ))
}

fn holder(h: &HolderArgs) -> Result<Report, CliError> {
    let a = &h.pair;
    let cfg = config::resolve(&a.common)?;
    let l1 = load(&a.family, &a.params)?;
    let l2 = load(&a.family, &a.params2)?;
    let (p, q) = (&l1.density, &l2.density);
    let zero_carrier = p.family().has_zero_carrier();
    let r = match a.method {
        Method::Oracle => measures::holder_oracle(p, q, h.alpha, h.gamma, &cfg)?,
        Method::Auto if !zero_carrier => measures::holder_oracle(p, q, h.alpha, h.gamma, &cfg)?,
        _ => {
            let w = omega_point(p, &a.omega)?;
            measures::holder_at(p, q, h.alpha, h.gamma, &w)?
        }
    };
    let inputs = json!({
        "p": echo(&l1, &a.params, a.common.show_natural),
        "q": echo(&l2, &a.params2, a.common.show_natural),
        "alpha": h.alpha,
        "beta": h.alpha / (h.alpha - 1.0),
        "gamma": h.gamma,
    });
    let fields = vec![
        ("params", Cell::Text(a.params.clone())),
        ("params2", Cell::Text(a.params2.clone())),
        ("alpha", Cell::Num(h.alpha)),
        ("gamma", Cell::Num(h.gamma)),
    ];
    Ok(measure_report(
        "holder",
        &a.family,
        inputs,
        &r,
        fields,
        Vec::new(),
    ))
}

fn mixture(a: &MixtureArgs) -> Result<Report, CliError> {
    let cfg = config::resolve(&a.common)?;
    if a.weights.len() != a.component.len() {
        return Err(CliError::Usage(format!(
            "{} weights but {} --component values",
            a.weights.len(),
            a.component.len()
        )));
    }
    let loaded = a
        .component
        .iter()
        .map(|c| load(&a.family, c))
        .collect::<Result<Vec<_>, _>>()?;
    let m = Mixture::new(
        a.weights.clone(),
        loaded.iter().map(|l| l.density.clone()).collect(),
    )?;
    let r = match a.method {
        Method::Auto | Method::Closed => measures::mixture_energy(&m)?,
        Method::Omega => return Err(no_omega("mixture")),
        Method::Oracle => MeasureReport::from_oracle(&oracle::integrate_mixture_square(&m, &cfg)?),
    };
    let components: Vec<Value> = loaded
        .iter()
        .zip(&a.component)
        .map(|(l, raw)| echo(l, raw, a.common.show_natural))
        .collect();
    let inputs = json!({ "weights": a.weights, "components": components });
    let fields = vec![
        ("weights", Cell::Nums(a.weights.clone())),
        ("components", Cell::Text(a.component.join(";"))),
    ];
    Ok(measure_report(
        "mixture",
        &a.family,
        inputs,
        &r,
        fields,
        Vec::new(),
    ))
}

const VERIFY_COLUMNS: [&str; 11] = [
    "index",
    "source",
    "measure",
    "closed",
    "oracle",
    "abs_delta",
    "rel_delta",
    "rtol",
    "within_tolerance",
    "expected",
    "note",
];

struct Check {
    index: usize,
    source: Vec<f64>,
    measure: &'static str,
    closed: f64,
    reference: f64,
    rtol: f64,
    atol: f64,
    expected: bool,
    note: String,
}

impl Check {
    fn within(&self) -> bool {
        (self.closed - self.reference).abs() <= self.rtol * self.reference.abs() + self.atol
    }

    fn row(&self) -> Vec<Cell> {
        let abs = (self.closed - self.reference).abs();
        vec![
            Cell::Count(self.index),
            Cell::Nums(self.source.clone()),
            Cell::Text(self.measure.into()),
            Cell::Num(self.closed),
            Cell::Num(self.reference),
            Cell::Num(abs),
            Cell::Num(abs / self.reference.abs()),
            Cell::Num(self.rtol),
            Cell::Flag(self.within()),
            Cell::Flag(self.expected),
            Cell::Text(self.note.clone()),
        ]
    }

    fn json(&self) -> Value {
        let abs = (self.closed - self.reference).abs();
        json!({
            "index": self.index,
            "source": self.source,
            "measure": self.measure,
            "closed": self.closed,
            "oracle": self.reference,
            "abs_delta": abs,
            "rel_delta": abs / self.reference.abs(),
            "rtol": self.rtol,
            "within_tolerance": self.within(),
            "expected": self.expected,
            "note": self.note,
        })
    }
}

fn verify_entry(family: &str, shape: &Option<String>) -> Result<CatalogEntry, CliError> {
    let Some(raw) = shape else {
        return Ok(families::by_name(family)?);
    };
    let named = families::parse_named(raw)?;
    let only = |key: &str| -> Result<f64, CliError> {
        match (named.len(), named.get(key).map(Vec::as_slice)) {
            (1, Some([v])) => Ok(*v),
            _ => Err(CliError::Usage(format!(
                "--shape for {family} takes exactly {key}=<value>"
            ))),
        }
    };
    match family {
        "pareto" => Ok(families::pareto(only("k")?)?),
        "mvn" => {
            let d = only("d")?;
            if d.fract() != 0.0 || d < 1.0 {
                return Err(CliError::Usage(format!(
                    "--shape d must be a positive integer, got {d}"
                )));
            }
            Ok(families::mvn(d as usize)?)
        }
        other => Err(CliError::Usage(format!("{other} has no shape parameters"))),
    }
}

fn verify(a: &VerifyArgs) -> Result<(Report, bool), CliError> {
    if a.grid != "default" {
        return Err(CliError::Usage(format!(
            "unknown grid {:?} (only \"default\")",
            a.grid
        )));
    }
    let cfg = config::resolve(&a.common)?;
    let entry = verify_entry(&a.family, &a.shape)?;
    let grid = &entry.default_grid;
    let densities = grid
        .iter()
        .map(|s| Density::from_source(entry.descriptor.clone(), s))
        .collect::<Result<Vec<_>, _>>()?;
    let mut checks = Vec::new();
    for (i, (s, p)) in grid.iter().zip(&densities).enumerate() {
        let check = |measure, closed, reference, rtol, atol, note: &str| Check {
            index: i,
            source: s.clone(),
            measure,
            closed,
            reference,
            rtol,
            atol,
            expected: true,
            note: note.to_string(),
        };
        match measures::energy(p) {
            Ok(e) => {
                let o = oracle::integrate_product(p, p, &cfg)?;
                checks.push(check("energy", e.value, o.value, 1e-7, 0.0, ""));
                if let Some(f) = &entry.closed_form_energy {
                    checks.push(check(
                        "energy_textbook",
                        f(s)?,
                        e.value,
                        1e-9,
                        0.0,
                        "textbook vs generic",
                    ));
                }
            }
            Err(Error::DomainViolation(_)) => {}
            Err(e) => return Err(e.into()),
        }
        let h = measures::shannon_entropy(p)?.value;
        let o = oracle::entropy_integral(p, &cfg)?;
        checks.push(check("entropy", h, o.value, 1e-6, cfg.abs_tol, ""));
        if let Some(f) = &entry.closed_form_entropy {
            checks.push(check(
                "entropy_textbook",
                f(s)?,
                h,
                1e-9,
                1e-12,
                "textbook vs generic",
            ));
        }
        let q = &densities[(i + 1) % densities.len()];
        if let Ok(c) = measures::cross_energy(p, q) {
            let o = oracle::integrate_product(p, q, &cfg)?;
            let note = format!("with grid point {}", (i + 1) % densities.len());
            checks.push(check("cross_energy", c.value, o.value, 1e-7, 0.0, &note));
        }
    }
    if entry.descriptor.name() == "beta" {
        let s = vec![2.0, 2.0];
        let p = Density::from_source(entry.descriptor.clone(), &s)?;
        let o = oracle::integrate_product(&p, &p, &cfg)?;
        checks.push(Check {
            index: grid.len(),
            source: s,
            measure: "energy_table_literal",
            closed: beta_table_literal_energy(2.0, 2.0),
            reference: o.value,
            rtol: 1e-7,
            atol: 0.0,
            expected: false,
            note: "literal printed form B(a,b)^2 G(2a-1) G(2b-1)/G(2a+2b-2); disagreement expected"
                .into(),
        });
    }
    let failures = checks.iter().filter(|c| c.within() != c.expected).count();
    let json = json!({
        "command": "verify",
        "family": entry.descriptor.id(),
        "grid": a.grid,
        "rows": checks.iter().map(Check::json).collect::<Vec<_>>(),
        "failures": failures,
        "passed": failures == 0,
    });
    let report = Report {
        json,
        columns: VERIFY_COLUMNS.iter().map(|c| c.to_string()).collect(),
        rows: checks.iter().map(Check::row).collect(),
    };
    Ok((report, failures > 0))
}

/// Rows of the comparison table at documented default parameters.
pub const TABLE_ROWS: [(&str, &str); 10] = [
    ("exponential", "lambda=2"),
    ("normal", "mu=0,sigma=1"),
    ("mvn", "mu=0:0,cov=1:0:0:1"),
    ("lognormal", "mu=0,sigma=1"),
    ("pareto", "a=1,k=1"),
    ("gamma", "alpha=2,beta=1"),
    ("gamma", "alpha=0.4,beta=1"),
    ("beta", "alpha=1,beta=1"),
    ("beta", "alpha=2,beta=2"),
    ("poisson", "lambda=1"),
];

const ENERGY_UNDEFINED: &str = "EnergyUndefined";

fn table(common: &Common) -> Result<Report, CliError> {
    let cfg = config::resolve(common)?;
    let columns = [
        "family",
        "params",
        "H_closed",
        "I_closed",
        "H_oracle",
        "I_oracle",
        "H_abs_delta",
        "I_abs_delta",
    ];
    let mut rows = Vec::new();
    let mut docs = Vec::new();
    for (family, params) in TABLE_ROWS {
        let l = load(family, params)?;
        let p = &l.density;
        let h = measures::shannon_entropy(p)?.value;
        let ho = oracle::entropy_integral(p, &cfg)?.value;
        let (i_cells, i_json) = match measures::energy(p) {
            Ok(e) => {
                let io = oracle::integrate_product(p, p, &cfg)?.value;
                let d = (e.value - io).abs();
                (
                    [Cell::Num(e.value), Cell::Num(io), Cell::Num(d)],
                    [json!(e.value), json!(io), json!(d)],
                )
            }
            Err(Error::DomainViolation(_)) => (
                [
                    Cell::Text(ENERGY_UNDEFINED.into()),
                    Cell::Text(ENERGY_UNDEFINED.into()),
                    Cell::Empty,
                ],
                [
                    json!(ENERGY_UNDEFINED),
                    json!(ENERGY_UNDEFINED),
                    Value::Null,
                ],
            ),
            Err(e) => return Err(e.into()),
        };
        let [i_closed, i_oracle, i_delta] = i_cells;
        rows.push(vec![
            Cell::Text(l.entry.descriptor.id()),
            Cell::Text(params.into()),
            Cell::Num(h),
            i_closed,
            Cell::Num(ho),
            i_oracle,
            Cell::Num((h - ho).abs()),
            i_delta,
        ]);
        let [ic, io, id] = i_json;
        let mut doc = json!({
            "family": l.entry.descriptor.id(),
            "params": params,
            "source": l.source,
            "H_closed": h,
            "H_oracle": ho,
            "H_abs_delta": (h - ho).abs(),
            "I_closed": ic,
            "I_oracle": io,
            "I_abs_delta": id,
        });
        if common.show_natural {
            doc["natural"] = json!(p.coords());
        }
        docs.push(doc);
    }
    Ok(Report {
        json: json!({ "command": "table", "rows": docs }),
        columns: columns.iter().map(|c| c.to_string()).collect(),
        rows,
    })
}
