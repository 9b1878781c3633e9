//! The expectation operator `τ_ν(U_λ)(Y) = E[U_λ(YW)]`, `W ~ W_m(I, ν)`,
//! exactly through `T_ν = Ξ⁻¹ Λ_ν Ξ` and approximately by Monte Carlo.
//!
//! Sampling uses Box–Muller on ChaCha8. Samples are drawn in fixed-size
//! blocks, block `b` from stream `b` of the seeded generator, and partial
//! sums are merged in block order, so a report depends only on the seed and
//! never on the number of worker threads.

use num_traits::{One, ToPrimitive, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::Serialize;

use crate::exactpoly::{factorial_rat, format_rational, pochhammer, pow2, rat, to_m_basis, u_expand, MPoly, Rational};
use crate::linalg::QMatrix;
use crate::parallel::{self, Strategy};
use crate::partitions::{partitions_of, Partition};
use crate::zonal::ZonalCache;
use crate::{Result, ZonalError};

/// `d_λ` with `C_λ = d_λ 𝒴_λ`.
pub fn d_constant(lambda: &Partition) -> Rational {
    let n = lambda.weight() as u64;
    let k = lambda.len();
    let mut num = Rational::one();
    for i in 0..k {
        for j in i + 1..k {
            let v = 2 * lambda.part(i) as i64 - 2 * lambda.part(j) as i64 - i as i64 + j as i64;
            num *= rat(v, 1);
        }
    }
    let mut den = Rational::one();
    for i in 0..k {
        den *= factorial_rat(2 * lambda.part(i) as u64 + (k - 1 - i) as u64);
    }
    num / den * pow2(n as u32) * factorial_rat(n) / factorial_rat(2 * n)
}

/// Partitions of `n` with at most `m` parts, descending lexicographic.
pub fn basis(n: usize, m: usize) -> Vec<Partition> {
    partitions_of(n).into_iter().filter(|p| p.len() <= m).collect()
}

/// Rows of `M`-basis coordinates over `basis`.
fn m_coordinates(polys: &[MPoly], basis: &[Partition]) -> Result<QMatrix> {
    let rows = polys
        .iter()
        .map(|f| {
            let s = to_m_basis(f)?;
            Ok(basis.iter().map(|p| s.get(p)).collect())
        })
        .collect::<Result<Vec<Vec<Rational>>>>()?;
    QMatrix::from_rows(rows)
}

/// `𝒴_λ = C_λ / d_λ` in `m` variables for every basis partition.
pub fn y_polynomials(cache: &mut ZonalCache, n: usize, m: usize) -> Vec<MPoly> {
    basis(n, m)
        .iter()
        .map(|l| cache.zonal_polynomial(l, m).scale(&d_constant(l).recip()))
        .collect()
}

pub fn u_polynomials(n: usize, m: usize) -> Result<Vec<MPoly>> {
    basis(n, m).iter().map(|l| u_expand(l, m)).collect()
}

/// `Ξ` with `𝒴 = Ξ 𝒰`, solved from `M`-coordinates by general elimination.
pub fn xi_matrix(n: usize, m: usize) -> Result<QMatrix> {
    xi_matrix_with(&mut ZonalCache::new(), n, m)
}

pub fn xi_matrix_with(cache: &mut ZonalCache, n: usize, m: usize) -> Result<QMatrix> {
    if m == 0 {
        return Err(ZonalError::OutOfRange("dimension must be at least 1".into()));
    }
    let b = basis(n, m);
    let y = m_coordinates(&y_polynomials(cache, n, m), &b)?;
    let u = m_coordinates(&u_polynomials(n, m)?, &b)?;
    y.mul(&u.inverse()?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionData {
    pub n: usize,
    pub m: usize,
    pub nu: u32,
    pub basis: Vec<Partition>,
    pub xi: QMatrix,
    /// `2^n (ν/2)_λ` per basis partition.
    pub lambda_diag: Vec<Rational>,
    /// `Ξ⁻¹ Λ_ν Ξ`.
    pub t: QMatrix,
}

impl TransitionData {
    /// `T_ν 𝒰` as polynomials.
    pub fn t_u(&self) -> Result<Vec<MPoly>> {
        let u = u_polynomials(self.n, self.m)?;
        Ok((0..self.basis.len())
            .map(|i| {
                let mut acc = MPoly::zero(self.m);
                for (j, uj) in u.iter().enumerate() {
                    let c = self.t.get(i, j);
                    if !c.is_zero() {
                        acc = &acc + &uj.scale(c);
                    }
                }
                acc
            })
            .collect())
    }

    /// `(T_ν 𝒰)(y)`, the exact expectations at `Y = diag(y)`.
    pub fn targets(&self, y: &[Rational]) -> Result<Vec<Rational>> {
        if y.len() != self.m {
            return Err(ZonalError::VariableMismatch(y.len(), self.m));
        }
        let u: Vec<Rational> = u_polynomials(self.n, self.m)?
            .iter()
            .map(|f| f.evaluate(y))
            .collect::<Result<_>>()?;
        self.t.mul_vec(&u)
    }
}

/// `(a)_λ` for the generalised Pochhammer symbol, exact.
fn gen_poch(a: &Rational, lambda: &Partition) -> Rational {
    crate::hypermat::gen_pochhammer(a, lambda)
}

pub fn transition_matrix(n: usize, m: usize, nu: u32) -> Result<TransitionData> {
    transition_matrix_with(&mut ZonalCache::new(), n, m, nu)
}

pub fn transition_matrix_with(cache: &mut ZonalCache, n: usize, m: usize, nu: u32) -> Result<TransitionData> {
    if nu == 0 {
        return Err(ZonalError::OutOfRange("degrees of freedom must be positive".into()));
    }
    let b = basis(n, m);
    let xi = xi_matrix_with(cache, n, m)?;
    let half_nu = rat(nu as i64, 2);
    let lambda_diag: Vec<Rational> = b.iter().map(|l| pow2(n as u32) * gen_poch(&half_nu, l)).collect();
    let t = xi.inverse()?.mul(&QMatrix::diagonal(&lambda_diag))?.mul(&xi)?;
    Ok(TransitionData { n, m, nu, basis: b, xi, lambda_diag, t })
}

/// `E[(tr YW)^n]` from the independent `χ²_ν` diagonal entries of `W`:
/// a multinomial sum of `Π y_j^{k_j} 2^{k_j} (ν/2)_{k_j}`.
pub fn trace_moment(n: usize, y: &[Rational], nu: u32) -> Rational {
    let half_nu = rat(nu as i64, 2);
    let moments: Vec<Vec<Rational>> = y
        .iter()
        .map(|yj| {
            (0..=n)
                .map(|k| num_traits::pow(yj.clone(), k) * pow2(k as u32) * pochhammer(&half_nu, k as u64))
                .collect()
        })
        .collect();
    // Exponential generating functions multiply: Σ_k moment_k / k!.
    let mut acc = vec![Rational::zero(); n + 1];
    acc[0] = Rational::one();
    for mj in &moments {
        let mut next = vec![Rational::zero(); n + 1];
        for (a, va) in acc.iter().enumerate() {
            if va.is_zero() {
                continue;
            }
            for b in 0..=n - a {
                next[a + b] += va * &mj[b] / factorial_rat(b as u64);
            }
        }
        acc = next;
    }
    &acc[n] * factorial_rat(n as u64)
}

/// Row-major dense square matrix of floats.
#[derive(Clone, Debug, PartialEq)]
pub struct FMatrix {
    pub dim: usize,
    pub data: Vec<f64>,
}

impl FMatrix {
    pub fn zeros(dim: usize) -> Self {
        FMatrix { dim, data: vec![0.0; dim * dim] }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    pub fn from_diag(values: &[f64]) -> Self {
        let mut a = Self::zeros(values.len());
        for (i, v) in values.iter().enumerate() {
            a.data[i * values.len() + i] = *v;
        }
        a
    }

    /// `diag(y) · self`.
    pub fn scale_rows(&self, y: &[f64]) -> Self {
        let mut out = self.clone();
        for (row, yi) in out.data.chunks_mut(self.dim).zip(y) {
            row.iter_mut().for_each(|x| *x *= yi);
        }
        out
    }

    fn principal_minor(&self, idx: &[usize]) -> f64 {
        let k = idx.len();
        let mut a: Vec<f64> = idx.iter().flat_map(|&i| idx.iter().map(move |&j| (i, j))).map(|(i, j)| self.get(i, j)).collect();
        let mut det = 1.0;
        for c in 0..k {
            let p = (c..k).max_by(|&x, &y| a[x * k + c].abs().total_cmp(&a[y * k + c].abs())).unwrap_or(c);
            if a[p * k + c] == 0.0 {
                return 0.0;
            }
            if p != c {
                for j in 0..k {
                    a.swap(p * k + j, c * k + j);
                }
                det = -det;
            }
            let pivot = a[c * k + c];
            det *= pivot;
            for r in c + 1..k {
                let f = a[r * k + c] / pivot;
                for j in c..k {
                    a[r * k + j] -= f * a[c * k + j];
                }
            }
        }
        det
    }

    /// `e_1..e_dim` of the eigenvalues, as sums of principal minors.
    pub fn elementary_values(&self) -> Vec<f64> {
        let m = self.dim;
        let mut e = vec![0.0; m + 1];
        e[0] = 1.0;
        for mask in 1u32..(1u32 << m) {
            let idx: Vec<usize> = (0..m).filter(|&i| mask & (1 << i) != 0).collect();
            e[idx.len()] += self.principal_minor(&idx);
        }
        e
    }
}

/// Standard normals by Box–Muller over a ChaCha8 stream.
pub struct GaussianRng {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl GaussianRng {
    pub fn seeded(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        GaussianRng { rng, spare: None }
    }

    /// Uniform on `(0, 1]`.
    fn uniform(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn next_normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let r = (-2.0 * self.uniform().ln()).sqrt();
        let theta = std::f64::consts::TAU * self.uniform();
        self.spare = Some(r * theta.sin());
        r * theta.cos()
    }
}

/// `S = XᵀX` for a `ν × m` matrix `X` of independent standard normals.
pub fn sample_wishart(m: usize, nu: u32, rng: &mut GaussianRng) -> FMatrix {
    let x: Vec<f64> = (0..nu as usize * m).map(|_| rng.next_normal()).collect();
    let mut s = FMatrix::zeros(m);
    for i in 0..m {
        for j in i..m {
            let v: f64 = (0..nu as usize).map(|r| x[r * m + i] * x[r * m + j]).sum();
            s.data[i * m + j] = v;
            s.data[j * m + i] = v;
        }
    }
    s
}

/// `U_λ` of the eigenvalues of `a`, without an eigendecomposition.
pub fn u_value(lambda: &Partition, a: &FMatrix) -> Result<f64> {
    if lambda.len() > a.dim {
        return Err(ZonalError::TooManyParts { partition: lambda.to_string(), vars: a.dim });
    }
    Ok(u_from_elementary(lambda, &a.elementary_values()))
}

fn u_from_elementary(lambda: &Partition, e: &[f64]) -> f64 {
    lambda
        .gaps()
        .iter()
        .enumerate()
        .map(|(r, &g)| e[r + 1].powi(g as i32))
        .product()
}

/// Samples per block; part of the reproducibility contract.
pub const BLOCK: usize = 4096;

/// Default rejection threshold for `|z|`.
pub const Z_THRESHOLD: f64 = 5.0;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McReport {
    pub n: usize,
    pub m: usize,
    pub nu: u32,
    pub y: Vec<String>,
    pub samples: usize,
    pub seed: u64,
    pub basis: Vec<Vec<u32>>,
    pub targets: Vec<f64>,
    pub exact_targets: Vec<String>,
    pub means: Vec<f64>,
    pub stderrs: Vec<f64>,
    pub zscores: Vec<f64>,
    pub threshold: f64,
    pub pass: bool,
}

pub fn mc_expectation_u(n: usize, m: usize, nu: u32, y: &[Rational], samples: usize, seed: u64) -> Result<McReport> {
    mc_expectation_u_with(n, m, nu, y, samples, seed, Strategy::default())
}

pub fn mc_expectation_u_with(
    n: usize,
    m: usize,
    nu: u32,
    y: &[Rational],
    samples: usize,
    seed: u64,
    strategy: Strategy,
) -> Result<McReport> {
    if samples == 0 {
        return Err(ZonalError::OutOfRange("need at least one sample".into()));
    }
    if y.len() != m {
        return Err(ZonalError::VariableMismatch(y.len(), m));
    }
    if m > 16 {
        return Err(ZonalError::OutOfRange(format!("dimension {m} too large for principal-minor evaluation")));
    }
    let data = transition_matrix(n, m, nu)?;
    let exact = data.targets(y)?;
    let yf: Vec<f64> = y.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect();
    let k = data.basis.len();

    let blocks: Vec<(u64, usize)> = (0..samples.div_ceil(BLOCK))
        .map(|b| (b as u64, BLOCK.min(samples - b * BLOCK)))
        .collect();
    let partials = parallel::map(&blocks, strategy, |&(b, count)| {
        let mut rng = GaussianRng::seeded(seed, b);
        let mut sum = vec![0.0; k];
        let mut sumsq = vec![0.0; k];
        for _ in 0..count {
            let a = sample_wishart(m, nu, &mut rng).scale_rows(&yf);
            let e = a.elementary_values();
            for (i, l) in data.basis.iter().enumerate() {
                let v = u_from_elementary(l, &e);
                sum[i] += v;
                sumsq[i] += v * v;
            }
        }
        (sum, sumsq)
    });
    let mut sum = vec![0.0; k];
    let mut sumsq = vec![0.0; k];
    for (s, q) in partials {
        for i in 0..k {
            sum[i] += s[i];
            sumsq[i] += q[i];
        }
    }

    let nf = samples as f64;
    let targets: Vec<f64> = exact.iter().map(|t| t.to_f64().unwrap_or(f64::NAN)).collect();
    let means: Vec<f64> = sum.iter().map(|s| s / nf).collect();
    let stderrs: Vec<f64> = (0..k)
        .map(|i| {
            if samples < 2 {
                return f64::INFINITY;
            }
            let var = (sumsq[i] - sum[i] * sum[i] / nf) / (nf - 1.0);
            (var.max(0.0) / nf).sqrt()
        })
        .collect();
    let zscores: Vec<f64> = (0..k)
        .map(|i| {
            let diff = means[i] - targets[i];
            if stderrs[i] > 0.0 {
                diff / stderrs[i]
            } else if diff == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        })
        .collect();
    let pass = zscores.iter().all(|z| z.abs() <= Z_THRESHOLD);
    Ok(McReport {
        n,
        m,
        nu,
        y: y.iter().map(format_rational).collect(),
        samples,
        seed,
        basis: data.basis.iter().map(|p| p.parts().to_vec()).collect(),
        targets,
        exact_targets: exact.iter().map(format_rational).collect(),
        means,
        stderrs,
        zscores,
        threshold: Z_THRESHOLD,
        pass,
    })
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::parse_rational;
    use crate::partition;
    use nalgebra::DMatrix;
    use num_bigint::BigInt;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn int(v: i64) -> Rational {
        Rational::from_integer(BigInt::from(v))
    }

    #[test]
    fn d_constants() {
        assert_eq!(d_constant(&partition![4]), q("1/4233600"));
        assert_eq!(d_constant(&partition![3, 1]), q("1/211680"));
        assert_eq!(d_constant(&partition![2, 2]), q("1/302400"));
        assert_eq!(q("302400") * q("16/5"), q("967680"));
    }

    #[test]
    fn xi_example() {
        let xi = xi_matrix(4, 2).unwrap();
        let want = QMatrix::from_i64(&[&[35, -120, 48], &[0, 6, -8], &[0, 0, 8]]).unwrap().scale(&int(120960));
        assert_eq!(xi, want);
        let one = xi_matrix(1, 1).unwrap();
        assert_eq!(one.rows(), 1);
        assert_eq!(one.get(0, 0), &d_constant(&partition![1]).recip());
    }

    #[test]
    fn xi_is_triangular_and_reconstructs() {
        let mut cache = ZonalCache::new();
        for n in 1..=6 {
            for m in 1..=3 {
                let xi = xi_matrix_with(&mut cache, n, m).unwrap();
                assert!(xi.is_upper_triangular(), "n={n} m={m}");
                assert!((0..xi.rows()).all(|i| !xi.get(i, i).is_zero()));
                let u = u_polynomials(n, m).unwrap();
                for (i, want) in y_polynomials(&mut cache, n, m).iter().enumerate() {
                    let mut got = MPoly::zero(m);
                    for (j, uj) in u.iter().enumerate() {
                        got = &got + &uj.scale(xi.get(i, j));
                    }
                    assert_eq!(&got, want, "n={n} m={m} row {i}");
                }
            }
        }
    }

    #[test]
    fn transition_example() {
        let data = transition_matrix(4, 2, 3).unwrap();
        assert_eq!(data.lambda_diag, vec![int(945), int(210), int(120)]);
        let want = QMatrix::from_i64(&[&[945, -2520, 720], &[0, 210, -120], &[0, 0, 120]]).unwrap();
        assert_eq!(data.t, want);
        let names: Vec<String> = vec!["y1".into(), "y2".into()];
        let tu = data.t_u().unwrap();
        assert_eq!(tu[0].render(Some(&names)), "945*y1^4 + 1260*y1^3*y2 + 1350*y1^2*y2^2 + 1260*y1*y2^3 + 945*y2^4");
        assert_eq!(tu[1].render(Some(&names)), "210*y1^3*y2 + 300*y1^2*y2^2 + 210*y1*y2^3");
        assert_eq!(tu[2].render(Some(&names)), "120*y1^2*y2^2");
        assert_eq!(data.targets(&[int(1), int(1)]).unwrap(), vec![int(5760), int(720), int(120)]);
        assert!(transition_matrix(4, 2, 0).is_err());
    }

    #[test]
    fn first_row_matches_trace_moment() {
        let mut cache = ZonalCache::new();
        let y = [q("1"), q("2"), q("1/3")];
        for n in 1..=5 {
            for m in 1..=3 {
                for nu in m as u32..m as u32 + 3 {
                    let data = transition_matrix_with(&mut cache, n, m, nu).unwrap();
                    let t = data.targets(&y[..m]).unwrap();
                    assert_eq!(t[0], trace_moment(n, &y[..m], nu), "n={n} m={m} nu={nu}");
                }
            }
        }
    }

    #[test]
    fn u_value_examples() {
        let a = FMatrix::from_diag(&[2.0, 3.0]);
        assert_eq!(u_value(&partition![1, 1], &a).unwrap(), 6.0);
        assert_eq!(u_value(&partition![2], &a).unwrap(), 25.0);
        assert!(u_value(&partition![1, 1, 1], &a).is_err());
    }

    #[test]
    fn u_value_matches_eigen_solver() {
        let mut rng = GaussianRng::seeded(7, 0);
        let y = [0.5, 1.5, 2.0, 3.0];
        for _ in 0..50 {
            let w = sample_wishart(4, 6, &mut rng);
            let a = w.scale_rows(&y);
            // YW is similar to Y^{1/2} W Y^{1/2}, which is symmetric.
            let sym = DMatrix::from_fn(4, 4, |i, j| y[i].sqrt() * w.get(i, j) * y[j].sqrt());
            let eig = sym.symmetric_eigen().eigenvalues;
            for l in [partition![3, 1], partition![2, 2, 1], partition![1, 1, 1, 1], partition![4, 2, 1]] {
                let mut e = [1.0, 0.0, 0.0, 0.0, 0.0];
                for v in eig.iter() {
                    for r in (1..5).rev() {
                        e[r] += e[r - 1] * v;
                    }
                }
                let want = u_from_elementary(&l, &e);
                let got = u_value(&l, &a).unwrap();
                assert!(((got - want) / want).abs() < 1e-8, "{l}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn samples_are_symmetric_psd_and_reproducible() {
        let mut a = GaussianRng::seeded(42, 3);
        let mut b = GaussianRng::seeded(42, 3);
        for _ in 0..100 {
            let s = sample_wishart(3, 4, &mut a);
            assert_eq!(s, sample_wishart(3, 4, &mut b));
            let m = DMatrix::from_fn(3, 3, |i, j| s.get(i, j));
            assert_eq!(m, m.transpose());
            assert!(m.symmetric_eigen().eigenvalues.iter().all(|&v| v >= -1e-10));
        }
    }

    #[test]
    fn sample_mean_is_nu_identity() {
        let (m, nu, n) = (3usize, 5u32, 100_000usize);
        let mut rng = GaussianRng::seeded(11, 0);
        let mut sum = vec![0.0; m * m];
        let mut sumsq = vec![0.0; m * m];
        for _ in 0..n {
            let s = sample_wishart(m, nu, &mut rng);
            for (i, v) in s.data.iter().enumerate() {
                sum[i] += v;
                sumsq[i] += v * v;
            }
        }
        for i in 0..m * m {
            let mean = sum[i] / n as f64;
            let se = ((sumsq[i] / n as f64 - mean * mean) / n as f64).sqrt();
            let want = if i % (m + 1) == 0 { nu as f64 } else { 0.0 };
            assert!((mean - want).abs() < 5.0 * se, "entry {i}: {mean}");
        }
    }

    #[test]
    fn monte_carlo_example_and_determinism() {
        let y = [int(1), int(1)];
        let seq = mc_expectation_u_with(4, 2, 3, &y, 20_000, 42, Strategy::Sequential).unwrap();
        let par = mc_expectation_u_with(4, 2, 3, &y, 20_000, 42, Strategy::Parallel).unwrap();
        assert_eq!(seq, par);
        let threads = crate::parallel::with_threads(3, || mc_expectation_u(4, 2, 3, &y, 20_000, 42).unwrap());
        assert_eq!(seq, threads);
        assert_eq!(seq.targets, vec![5760.0, 720.0, 120.0]);
        assert!(seq.pass, "{:?}", seq.zscores);
        assert!(mc_expectation_u(4, 2, 3, &y, 0, 1).is_err());
        assert!(mc_expectation_u(4, 2, 3, &y[..1], 10, 1).is_err());
    }
}
