use std::fmt;
use std::io::Write;

use num_traits::ToPrimitive;
use serde_json::json;
use zonal_core::exactpoly::{format_rational, parse_rational, Rational};
use zonal_core::hypermat::{matrix_pfq, scalar_pfq, PfqSpec};
use zonal_core::partitions::{parse_parts, partitions_of};
use zonal_core::verify::{self, Ranges, Suite};
use zonal_core::zonal::{self, is_zero_coefficient, ZonalCache};
use zonal_core::{wishart, Partition, ZonalError};

use crate::{Command, PfqParams};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(s) | CliError::Io(s) => f.write_str(s),
        }
    }
}

impl From<ZonalError> for CliError {
    fn from(e: ZonalError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

type CliResult = Result<u8, CliError>;

/// Parses a partition, sorting unordered input with a warning.
fn partition_arg(s: &str) -> Result<Partition, CliError> {
    let parts = parse_parts(s)?;
    match Partition::new(parts.clone()) {
        Ok(p) => Ok(p),
        Err(_) => {
            let p = Partition::from_unsorted(parts);
            eprintln!("warning: {s:?} is not in descending order; using {p}");
            Ok(p)
        }
    }
}

fn rational_list(s: &str) -> Result<Vec<Rational>, CliError> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|t| parse_rational(t).map_err(CliError::from)).collect()
}

fn print_json(v: &impl serde::Serialize) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(v).map_err(|e| CliError::Io(e.to_string()))?;
    println!("{text}");
    Ok(())
}

pub fn run(command: Command) -> CliResult {
    match command {
        Command::Poly { partition, vars, m_basis, json } => poly(&partition, vars.as_deref(), m_basis, json),
        Command::Coeff { kappa, lambda } => {
            let (k, l) = (partition_arg(&kappa)?, partition_arg(&lambda)?);
            println!("{}", format_rational(&zonal::coefficient(&k, &l)?));
            Ok(0)
        }
        Command::Table { n, json } => {
            if n == 0 {
                return Err(CliError::Usage("table needs n >= 1".into()));
            }
            let t = zonal::coefficient_table(n);
            if json {
                print_json(&t.to_json())?;
            } else {
                print!("{}", t.render_text());
            }
            Ok(0)
        }
        Command::Zeros { n, out } => zeros(n, out.as_deref()),
        Command::Pfq { params, eigs } => {
            let eigs = rational_list(&eigs)?;
            let v = matrix_pfq(&pfq_spec(&params)?, &eigs)?;
            println!("{}", render_value(&v, params.float));
            Ok(0)
        }
        Command::PfqScalar { params, z } => {
            let v = scalar_pfq(&pfq_spec(&params)?, &parse_rational(&z)?)?;
            println!("{}", render_value(&v, params.float));
            Ok(0)
        }
        Command::Verify { suite, n_max, m_max, a_max } => {
            let suite: Suite = suite.parse()?;
            let report = verify::run(suite, &Ranges { n_max, m_max, a_max, ..Default::default() });
            print_json(&report)?;
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::Wishart { n, m, nu, samples, seed, y } => {
            let y = match y {
                Some(s) => rational_list(&s)?,
                None => (1..=m as i64).map(|k| Rational::from_integer(k.into())).collect(),
            };
            let report = wishart::mc_expectation_u(n, m, nu, &y, samples, seed)?;
            print_json(&report)?;
            Ok(if report.pass { 0 } else { 1 })
        }
    }
}

fn poly(partition: &str, vars: Option<&str>, m_basis: bool, json: bool) -> CliResult {
    let kappa = partition_arg(partition)?;
    let mut cache = ZonalCache::new();
    let names: Option<Vec<String>> = vars.map(|v| match v.trim().parse::<usize>() {
        Ok(m) => (1..=m).map(|i| format!("y{i}")).collect(),
        Err(_) => v.split(',').map(|s| s.trim().to_string()).collect(),
    });
    if m_basis || names.is_none() {
        let s = cache.zonal_polynomial_m(&kappa);
        if json {
            let terms: Vec<_> = s
                .iter()
                .map(|(p, c)| json!({"partition": p.parts(), "coefficient": format_rational(c)}))
                .collect();
            print_json(&json!({"partition": kappa.parts(), "m_basis": terms}))?;
        } else {
            let text: Vec<String> = s.iter().map(|(p, c)| format!("{}*M{}", format_rational(c), p)).collect();
            println!("{}", if text.is_empty() { "0".into() } else { text.join(" + ") });
        }
        return Ok(0);
    }
    let names = names.expect("checked above");
    if names.iter().any(String::is_empty) {
        return Err(CliError::Usage("empty variable name".into()));
    }
    let f = cache.zonal_polynomial(&kappa, names.len());
    if json {
        print_json(&json!({"partition": kappa.parts(), "vars": names, "terms": f.to_records()}))?;
    } else {
        println!("{}", f.render(Some(&names)));
    }
    Ok(0)
}

fn zeros(n: usize, out: Option<&std::path::Path>) -> CliResult {
    if n == 0 {
        return Err(CliError::Usage("zeros needs n >= 1".into()));
    }
    let text = pbm(n)?;
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(0)
}

/// Plain PBM; `1` (black) marks a zero coefficient.
pub fn pbm(n: usize) -> Result<String, CliError> {
    let ps = partitions_of(n);
    let mut out = format!("P1\n# zonal coefficient zeros n={n} zonal {VERSION}\n{0} {0}\n", ps.len());
    for kappa in &ps {
        let mut row = String::with_capacity(ps.len());
        for lambda in &ps {
            let zero = if lambda > kappa { true } else { is_zero_coefficient(kappa, lambda)? };
            row.push(if zero { '1' } else { '0' });
        }
        for chunk in row.as_bytes().chunks(70) {
            out.push_str(std::str::from_utf8(chunk).expect("ascii"));
            out.push('\n');
        }
    }
    Ok(out)
}

fn pfq_spec(p: &PfqParams) -> Result<PfqSpec<Rational>, CliError> {
    Ok(PfqSpec::new(rational_list(&p.upper)?, rational_list(&p.lower)?, p.order))
}

fn render_value(v: &Rational, float: bool) -> String {
    if float {
        format!("{}", v.to_f64().unwrap_or(f64::NAN))
    } else {
        format_rational(v)
    }
}
