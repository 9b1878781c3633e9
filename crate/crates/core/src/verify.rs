//! Verification sweeps that cross-check the engine against independent
//! routes, each producing a machine-readable [`Report`].

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::closedforms;
use crate::exactpoly::{elementary, format_rational, MPoly, Rational};
use crate::geomcheck;
use crate::parallel::{self, Strategy};
use crate::partitions::{partitions_of, Partition};
use crate::wishart;
use crate::zonal::{CoeffEngine, ZonalCache};
use crate::{Result, ZonalError};

/// Outcome of one suite: how many cases were checked and which failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub range: BTreeMap<String, i64>,
    pub checked: usize,
    pub failures: Vec<Failure>,
    /// Observations that are reported but do not fail the suite.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub case: String,
    pub detail: String,
}

impl Report {
    pub fn new<'a>(suite: &str, range: impl IntoIterator<Item = (&'a str, i64)>) -> Self {
        Report {
            suite: suite.to_string(),
            range: range.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            checked: 0,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    /// Records one case; `describe` is only called on failure.
    pub fn check(&mut self, ok: bool, describe: impl FnOnce() -> (String, String)) {
        self.checked += 1;
        if !ok {
            let (case, detail) = describe();
            self.failures.push(Failure { case, detail });
        }
    }

    pub fn fail(&mut self, case: String, detail: String) {
        self.checked += 1;
        self.failures.push(Failure { case, detail });
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Folds another report's cases into this one.
    pub fn absorb(&mut self, other: Report) {
        self.checked += other.checked;
        self.failures.extend(other.failures);
        self.notes.extend(other.notes);
    }
}

/// Verification suites exposed on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    ClosedForms,
    Conjectures,
    Identities,
    Laplace,
    Wishart,
    Trace,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::ClosedForms, Suite::Conjectures, Suite::Identities, Suite::Laplace, Suite::Wishart, Suite::Trace];

    pub fn name(self) -> &'static str {
        match self {
            Suite::ClosedForms => "closed-forms",
            Suite::Conjectures => "conjectures",
            Suite::Identities => "identities",
            Suite::Laplace => "laplace",
            Suite::Wishart => "wishart",
            Suite::Trace => "trace",
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = ZonalError;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| ZonalError::Parse(format!("unknown suite {s:?}")))
    }
}

/// Range overrides; `None` keeps the suite default.
#[derive(Clone, Copy, Debug, Default)]
pub struct Ranges {
    pub n_max: Option<usize>,
    pub m_max: Option<usize>,
    pub a_max: Option<i64>,
    pub strategy: Strategy,
}

pub fn run(suite: Suite, ranges: &Ranges) -> Report {
    let s = ranges.strategy;
    match suite {
        Suite::ClosedForms => {
            let mut r = ClosedFormRanges::default();
            if let Some(n) = ranges.n_max {
                r = ClosedFormRanges::up_to(n);
            }
            closed_forms(&r, s)
        }
        Suite::Conjectures => {
            let mut r = ConjectureRanges::default();
            if let Some(a) = ranges.a_max {
                r.diag3_a_max = a;
                r.diag4_a_max = a;
            }
            conjectures(&r, s)
        }
        Suite::Identities => crate::closedforms::verify_identities(ranges.a_max.unwrap_or(25)),
        Suite::Laplace => laplace(ranges.n_max.unwrap_or(6), ranges.m_max.unwrap_or(6), s),
        Suite::Wishart => wishart(ranges.n_max.unwrap_or(6), ranges.m_max.unwrap_or(3), s),
        Suite::Trace => trace(ranges.n_max.unwrap_or(8), ranges.m_max.unwrap_or(3), s),
    }
}

/// Merges per-weight reports in order.
fn merge(mut base: Report, parts: Vec<Report>) -> Report {
    for p in parts {
        base.absorb(p);
    }
    base
}

fn diff(a: &Rational, b: &Rational) -> String {
    format!("{} != {}", format_rational(a), format_rational(b))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedFormRanges {
    pub row1_n_max: i64,
    /// Largest weight `2a − b` of the two-part family.
    pub two_part_max: i64,
    pub largest_n: RangeInclusive<i64>,
    pub smallest_n: RangeInclusive<i64>,
}

impl Default for ClosedFormRanges {
    fn default() -> Self {
        ClosedFormRanges { row1_n_max: 20, two_part_max: 24, largest_n: 6..=18, smallest_n: 8..=20 }
    }
}

impl ClosedFormRanges {
    /// Every family checked up to weight `n`.
    pub fn up_to(n: usize) -> Self {
        let n = n as i64;
        ClosedFormRanges {
            row1_n_max: n,
            two_part_max: n,
            largest_n: closedforms::LARGEST_CORNER_MIN_N..=n,
            smallest_n: 2 * closedforms::SMALLEST_CORNER_MAX_A as i64..=n,
        }
    }

    fn max_n(&self) -> i64 {
        self.row1_n_max.max(self.two_part_max).max(*self.largest_n.end()).max(*self.smallest_n.end())
    }
}

/// Every closed form against the recurrence, exactly.
pub fn closed_forms(r: &ClosedFormRanges, strategy: Strategy) -> Report {
    let base = Report::new(
        "closed-forms",
        [
            ("row1_n_max", r.row1_n_max),
            ("two_part_max", r.two_part_max),
            ("largest_n_min", *r.largest_n.start()),
            ("largest_n_max", *r.largest_n.end()),
            ("smallest_n_min", *r.smallest_n.start()),
            ("smallest_n_max", *r.smallest_n.end()),
        ],
    );
    let ns: Vec<i64> = (1..=r.max_n()).collect();
    let parts = parallel::map(&ns, strategy, |&n| closed_forms_at(r, n));
    merge(base, parts)
}

fn closed_forms_at(r: &ClosedFormRanges, n: i64) -> Report {
    let mut rep = Report::new("closed-forms", []);
    let mut e = CoeffEngine::with_options(n as usize, true, Strategy::Sequential);
    let p = |v: Vec<i64>| Partition::new(v.into_iter().map(|x| x as u32).collect()).expect("valid");

    if n <= r.row1_n_max {
        for m in 0..=n / 2 {
            let want = e.coefficient(&p(vec![n]), &p(vec![n - m, m])).expect("same weight");
            let got = closedforms::cf_row1(n, m).expect("in range");
            rep.check(got == want, || (format!("row1 n={n} m={m}"), diff(&got, &want)));
        }
    }

    if n <= r.two_part_max {
        for a in (n + 1) / 2..=n {
            let b = 2 * a - n;
            let diag = closedforms::cf_two_part(a, b, 0).expect("in range");
            for d in 0..=b / 2 {
                let want = e.coefficient(&p(vec![a, a - b]), &p(vec![a - d, a - b + d])).expect("same weight");
                let got = closedforms::cf_two_part(a, b, d).expect("in range");
                rep.check(got == want, || (format!("two-part a={a} b={b} d={d}"), diff(&got, &want)));
                let ratio = closedforms::cf_two_part_ratio(b, d).expect("in range");
                let q = &got / &diag;
                rep.check(q == ratio, || (format!("two-part-ratio a={a} b={b} d={d}"), diff(&q, &ratio)));
            }
        }
    }

    if r.largest_n.contains(&n) {
        for sk in closedforms::LARGEST_CORNER_SHAPES {
            for sl in closedforms::LARGEST_CORNER_SHAPES {
                let (sk, sl) = (Partition::new(sk.to_vec()).expect("valid"), Partition::new(sl.to_vec()).expect("valid"));
                let kappa = closedforms::largest_corner_partition(&sk, n).expect("n >= 6");
                let lambda = closedforms::largest_corner_partition(&sl, n).expect("n >= 6");
                let want = e.coefficient(&kappa, &lambda).expect("same weight");
                let got = closedforms::cf_corner_largest(&sk, &sl, n).expect("stored");
                rep.check(got == want, || (format!("largest n={n} {kappa} {lambda}"), diff(&got, &want)));
            }
        }
    }

    if r.smallest_n.contains(&n) {
        let top = closedforms::SMALLEST_CORNER_MAX_A.min((n / 2) as u32);
        for ak in 0..=top {
            for al in 0..=top {
                let kappa = closedforms::smallest_corner_partition(ak, n).expect("fits");
                let lambda = closedforms::smallest_corner_partition(al, n).expect("fits");
                let want = e.coefficient(&kappa, &lambda).expect("same weight");
                let got = closedforms::cf_corner_smallest(ak, al, n).expect("stored");
                rep.check(got == want, || (format!("smallest n={n} a={ak} a'={al}"), diff(&got, &want)));
            }
        }
    }
    rep
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjectureRanges {
    pub diag3_a_max: i64,
    pub diag4_a_max: i64,
    pub limit_n: RangeInclusive<i64>,
}

impl Default for ConjectureRanges {
    fn default() -> Self {
        ConjectureRanges { diag3_a_max: 8, diag4_a_max: 6, limit_n: 20..=60 }
    }
}

/// The conjectured diagonal formulas against the recurrence, and the
/// approach of first-row entries to the conjectured limits.
pub fn conjectures(r: &ConjectureRanges, strategy: Strategy) -> Report {
    let base = Report::new(
        "conjectures",
        [
            ("diag3_a_max", r.diag3_a_max),
            ("diag4_a_max", r.diag4_a_max),
            ("limit_n_min", *r.limit_n.start()),
            ("limit_n_max", *r.limit_n.end()),
        ],
    );
    // Group tuples by weight so each weight builds one engine.
    let mut by_n: BTreeMap<i64, Vec<Vec<i64>>> = BTreeMap::new();
    for a in 0..=r.diag3_a_max {
        for c in 0..=a {
            for b in 0..=c {
                by_n.entry(3 * a - b - c).or_default().push(vec![a, b, c]);
            }
        }
    }
    for a in 0..=r.diag4_a_max {
        for d in 0..=a {
            for c in 0..=d {
                for b in 0..=c {
                    by_n.entry(4 * a - b - c - d).or_default().push(vec![a, b, c, d]);
                }
            }
        }
    }
    let groups: Vec<(i64, Vec<Vec<i64>>)> = by_n.into_iter().filter(|(n, _)| *n > 0).collect();
    let parts = parallel::map(&groups, strategy, |(n, tuples)| {
        let mut rep = Report::new("conjectures", []);
        let mut e = CoeffEngine::with_options(*n as usize, true, Strategy::Sequential);
        for t in tuples {
            let (kappa, got) = match t.as_slice() {
                [a, b, c] => (
                    closedforms::diag3_partition(*a, *b, *c).expect("valid"),
                    closedforms::conj_diag3(*a, *b, *c).expect("ordered"),
                ),
                [a, b, c, d] => (
                    closedforms::diag4_partition(*a, *b, *c, *d).expect("valid"),
                    closedforms::conj_diag4(*a, *b, *c, *d).expect("ordered"),
                ),
                _ => unreachable!(),
            };
            let want = e.diagonal(&kappa).expect("same weight");
            let label = if t.len() == 3 { "diag3" } else { "diag4" };
            rep.check(got == want, || (format!("{label} {t:?} {kappa}"), diff(&got, &want)));
        }
        rep
    });
    let mut rep = merge(base, parts);

    let tol = Rational::new(1.into(), 100.into());
    for shape in closedforms::limit_shapes() {
        let limit = closedforms::conj_limit(&shape);
        let mut prev: Option<Rational> = None;
        for n in r.limit_n.clone() {
            let v = closedforms::cf_corner_largest(&Partition::empty(), &shape, n).expect("stored");
            let gap = (v - &limit).abs();
            if let Some(p) = &prev {
                let ok = &gap < p;
                rep.check(ok, || (format!("limit {shape} n={n}"), "gap not strictly decreasing".into()));
            }
            prev = Some(gap);
        }
        if let Some(last) = prev {
            rep.check(last < tol, || {
                (format!("limit {shape} n={}", r.limit_n.end()), format!("gap {} >= 1/100", format_rational(&last)))
            });
        }
    }
    rep
}

/// `Δ_Y C_λ = (ρ_λ + (m−1)n) C_λ` for every `λ ⊢ n ≤ n_max`,
/// `len(λ) ≤ m ≤ m_max`.
pub fn laplace(n_max: usize, m_max: usize, strategy: Strategy) -> Report {
    let base = Report::new("laplace", [("n_max", n_max as i64), ("m_max", m_max as i64)]);
    let ns: Vec<usize> = (1..=n_max).collect();
    let parts = parallel::map(&ns, strategy, |&n| {
        let mut rep = Report::new("laplace", []);
        let mut cache = ZonalCache::with_strategy(Strategy::Sequential);
        for lambda in partitions_of(n) {
            for m in lambda.len()..=m_max {
                let r = geomcheck::check_eigen_with(&mut cache, &lambda, m);
                rep.check(r.holds, || (format!("{lambda} m={m}"), format!("eigenvalue {} fails", r.eigenvalue)));
            }
        }
        rep
    });
    merge(base, parts)
}

/// `Σ_{λ⊢n} C_λ(y_1..y_m) = (y_1 + ⋯ + y_m)^n` as polynomials.
pub fn trace(n_max: usize, m_max: usize, strategy: Strategy) -> Report {
    let base = Report::new("trace", [("n_max", n_max as i64), ("m_max", m_max as i64)]);
    let ns: Vec<usize> = (0..=n_max).collect();
    let parts = parallel::map(&ns, strategy, |&n| {
        let mut rep = Report::new("trace", []);
        let mut cache = ZonalCache::with_strategy(Strategy::Sequential);
        for m in 1..=m_max {
            let mut sum = MPoly::zero(m);
            for lambda in partitions_of(n) {
                sum = &sum + &cache.zonal_polynomial(&lambda, m);
            }
            let ok = sum == elementary(1, m).pow(n as u32);
            rep.check(ok, || (format!("n={n} m={m}"), "sum differs from trace power".into()));
        }
        rep
    });
    merge(base, parts)
}

/// Structure of `Ξ` and `T_ν`, exact reconstruction `Ξ𝒰 = 𝒴`, and the
/// first row of `T_ν 𝒰` against the chi-square moment route for
/// `E[(tr YW)^n]`.
pub fn wishart(n_max: usize, m_max: usize, strategy: Strategy) -> Report {
    let base = Report::new("wishart", [("n_max", n_max as i64), ("m_max", m_max as i64)]);
    let ns: Vec<usize> = (1..=n_max).collect();
    let parts = parallel::map(&ns, strategy, |&n| {
        let mut rep = Report::new("wishart", []);
        let mut cache = ZonalCache::with_strategy(Strategy::Sequential);
        for m in 1..=m_max {
            let y: Vec<Rational> = (1..=m as i64).map(|k| Rational::from_integer(k.into())).collect();
            let xi = match wishart::xi_matrix_with(&mut cache, n, m) {
                Ok(x) => x,
                Err(err) => {
                    rep.fail(format!("xi n={n} m={m}"), err.to_string());
                    continue;
                }
            };
            let nonsingular_triangular = xi.is_upper_triangular() && (0..xi.rows()).all(|i| !xi.get(i, i).is_zero());
            rep.check(nonsingular_triangular, || (format!("xi n={n} m={m}"), "not nonsingular upper triangular".into()));

            let u = wishart::u_polynomials(n, m).expect("basis fits");
            let ys = wishart::y_polynomials(&mut cache, n, m);
            for (i, want) in ys.iter().enumerate() {
                let mut got = MPoly::zero(m);
                for (j, uj) in u.iter().enumerate() {
                    got = &got + &uj.scale(xi.get(i, j));
                }
                rep.check(&got == want, || (format!("reconstruct n={n} m={m} row {i}"), "Ξ𝒰 differs from 𝒴".into()));
            }

            for nu in m as u32..m as u32 + 3 {
                let data = wishart::transition_matrix_with(&mut cache, n, m, nu).expect("nonsingular");
                rep.check(data.t.is_upper_triangular(), || (format!("T n={n} m={m} nu={nu}"), "not upper triangular".into()));
                let targets = data.targets(&y).expect("dimension matches");
                let want = wishart::trace_moment(n, &y, nu);
                rep.check(targets[0] == want, || (format!("trace-moment n={n} m={m} nu={nu}"), diff(&targets[0], &want)));
                let negative = data
                    .t_u()
                    .expect("basis fits")
                    .iter()
                    .any(|f| f.terms().any(|(_, c)| c.is_negative()));
                if negative {
                    rep.notes.push(format!("T𝒰 has a negative coefficient at n={n} m={m} nu={nu}"));
                }
            }
        }
        rep
    });
    merge(base, parts)
}
