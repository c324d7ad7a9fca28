//! Numeric probes for Gaussians `exp(-π xᵀ A x)` on `R^n`.
//!
//! Transforms use the pairing `exp(-2πi x·ξ)`, under which `A = I` is
//! self-dual. Integrals are trapezoid sums with a fixed pairwise summation
//! order, so results are bit-reproducible.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};

const SYMMETRY_TOL: f64 = 1e-14;
pub const DECAY_THRESHOLD: f64 = 1e-14;

/// Sum in a fixed binary-tree order.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 8 {
        return v.iter().sum();
    }
    let mid = v.len() / 2;
    pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
}

/// A symmetric positive definite matrix `A`, read as `exp(-π xᵀ A x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticFormSpd {
    a: DMatrix<f64>,
}

impl QuadraticFormSpd {
    pub fn new(a: DMatrix<f64>) -> Result<Self> {
        let n = a.nrows();
        if n == 0 || a.ncols() != n {
            return Err(Error::NotSpd(format!("matrix is {}x{}", a.nrows(), a.ncols())));
        }
        if a.iter().any(|v| !v.is_finite()) {
            return Err(Error::NotSpd("non-finite entry".into()));
        }
        let scale = a.amax().max(1.0);
        if (&a - a.transpose()).amax() > SYMMETRY_TOL * scale {
            return Err(Error::NotSpd("matrix is not symmetric".into()));
        }
        for k in 1..=n {
            let minor = a.view((0, 0), (k, k)).determinant();
            if minor <= 0.0 {
                return Err(Error::NotSpd(format!("leading minor {k} is {minor}")));
            }
        }
        Ok(QuadraticFormSpd { a })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::NotSpd("rows have unequal lengths".into()));
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn identity(n: usize) -> Self {
        QuadraticFormSpd {
            a: DMatrix::identity(n, n),
        }
    }

    pub fn diagonal(d: &[f64]) -> Result<Self> {
        Self::new(DMatrix::from_diagonal(&DVector::from_row_slice(d)))
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim())
            .map(|i| self.a.row(i).iter().copied().collect())
            .collect()
    }

    pub fn determinant(&self) -> f64 {
        self.a.determinant()
    }

    pub fn inverse(&self) -> QuadraticFormSpd {
        let inv = self
            .a
            .clone()
            .cholesky()
            .expect("positive definite")
            .inverse();
        let sym = (&inv + inv.transpose()) * 0.5;
        QuadraticFormSpd { a: sym }
    }

    pub fn quadratic(&self, x: &[f64]) -> f64 {
        let v = DVector::from_row_slice(x);
        (v.transpose() * &self.a * &v)[(0, 0)]
    }

    /// `exp(-π xᵀ A x)`.
    pub fn gaussian(&self, x: &[f64]) -> f64 {
        (-PI * self.quadratic(x)).exp()
    }

    /// Principal submatrix on the given coordinates.
    pub fn principal(&self, coords: &[usize]) -> Result<QuadraticFormSpd> {
        let k = coords.len();
        Self::new(DMatrix::from_fn(k, k, |i, j| self.a[(coords[i], coords[j])]))
    }

    /// `A₁₁ - A₁₂ A₂₂⁻¹ A₂₁` for the split after the first `k` coordinates.
    pub fn schur_complement(&self, k: usize) -> Result<QuadraticFormSpd> {
        let n = self.dim();
        if k == 0 || k >= n {
            return Err(Error::Precondition(format!("split {k} of dimension {n}")));
        }
        let a11 = self.a.view((0, 0), (k, k));
        let a12 = self.a.view((0, k), (k, n - k));
        let a22 = self.a.view((k, k), (n - k, n - k)).into_owned();
        let a22_inv = a22.cholesky().expect("principal block is SPD").inverse();
        let s = a11 - a12 * a22_inv * a12.transpose();
        Self::new((&s + s.transpose()) * 0.5)
    }
}

impl FromStr for QuadraticFormSpd {
    type Err = Error;

    /// Rows separated by `;`, entries by `,`: `"2,1;1,2"`.
    fn from_str(s: &str) -> Result<Self> {
        let rows: Vec<Vec<f64>> = crate::io::parse_matrix(s)?;
        Self::from_rows(&rows)
    }
}

impl fmt::Display for QuadraticFormSpd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| r.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        f.write_str(&rows.join(";"))
    }
}

/// Transform of `exp(-π xᵀ A x)`: `det(A)^{-1/2} exp(-π ξᵀ A⁻¹ ξ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianTransform {
    pub amplitude: f64,
    pub form: QuadraticFormSpd,
}

pub fn gaussian_fourier_closed_form(q: &QuadraticFormSpd) -> GaussianTransform {
    GaussianTransform {
        amplitude: q.determinant().powf(-0.5),
        form: q.inverse(),
    }
}

/// Trapezoid rule on `[-R, R]` per axis with `N` intervals.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridQuadrature {
    pub half_width: f64,
    pub points: usize,
}

impl Default for GridQuadrature {
    fn default() -> Self {
        GridQuadrature {
            half_width: 8.0,
            points: 512,
        }
    }
}

impl GridQuadrature {
    pub fn new(half_width: f64, points: usize) -> Result<Self> {
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::Precondition("half-width must be positive".into()));
        }
        if points < 16 || !points.is_multiple_of(2) {
            return Err(Error::Precondition("point count must be even and at least 16".into()));
        }
        Ok(GridQuadrature { half_width, points })
    }

    pub fn step(&self) -> f64 {
        2.0 * self.half_width / self.points as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        let h = self.step();
        (0..=self.points)
            .map(|k| -self.half_width + k as f64 * h)
            .collect()
    }

    pub fn weights(&self) -> Vec<f64> {
        let h = self.step();
        (0..=self.points)
            .map(|k| if k == 0 || k == self.points { h / 2.0 } else { h })
            .collect()
    }

    pub fn scaled(&self, factor: f64) -> GridQuadrature {
        GridQuadrature {
            half_width: self.half_width * factor,
            points: self.points,
        }
    }

    /// `∫ f` over `[-R, R]`.
    pub fn integrate_1d(&self, f: impl Fn(f64) -> f64) -> f64 {
        let terms: Vec<f64> = self
            .nodes()
            .iter()
            .zip(self.weights())
            .map(|(&x, w)| w * f(x))
            .collect();
        pairwise_sum(&terms)
    }

    /// `∫ f` over `[-R, R]^dim` as a tensor-product rule.
    pub fn integrate(&self, dim: usize, f: impl Fn(&[f64]) -> f64) -> f64 {
        let nodes = self.nodes();
        let weights = self.weights();
        let m = nodes.len();
        let total = m.pow(dim as u32);
        let mut x = vec![0.0; dim];
        let terms: Vec<f64> = (0..total)
            .map(|mut idx| {
                let mut w = 1.0;
                for xi in x.iter_mut() {
                    let k = idx % m;
                    idx /= m;
                    *xi = nodes[k];
                    w *= weights[k];
                }
                w * f(&x)
            })
            .collect();
        pairwise_sum(&terms)
    }

    /// Largest `|f|` over the boundary nodes of `[-R, R]^dim`.
    pub fn boundary_max(&self, dim: usize, f: &dyn Fn(&[f64]) -> f64) -> f64 {
        let nodes = self.nodes();
        let m = nodes.len();
        let mut worst = 0.0f64;
        let mut x = vec![0.0; dim];
        for mut idx in 0..m.pow(dim as u32) {
            let mut on_boundary = false;
            for xi in x.iter_mut() {
                let k = idx % m;
                idx /= m;
                on_boundary |= k == 0 || k == m - 1;
                *xi = nodes[k];
            }
            if on_boundary {
                worst = worst.max(f(&x).abs());
            }
        }
        worst
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NumericTransform {
    pub points: Vec<Vec<f64>>,
    /// `(re, im)` of the transform at each point
    pub values: Vec<[f64; 2]>,
    pub boundary_max: f64,
    /// largest deviation from a reference, when one was supplied
    pub max_deviation: Option<f64>,
}

/// `f̂(ξ) = ∫ f(x) exp(-2πi x·ξ) dx` at the given points, after checking
/// that `f` has decayed at the grid boundary.
pub fn numeric_fourier(
    f: &dyn Fn(&[f64]) -> f64,
    dim: usize,
    q: &GridQuadrature,
    points: &[Vec<f64>],
    reference: Option<&dyn Fn(&[f64]) -> f64>,
) -> Result<NumericTransform> {
    let boundary = q.boundary_max(dim, f);
    if boundary > DECAY_THRESHOLD {
        return Err(Error::InsufficientDecay(boundary));
    }
    Ok(numeric_fourier_truncated(f, dim, q, points, reference))
}

/// As [`numeric_fourier`], without the decay check.
pub fn numeric_fourier_truncated(
    f: &dyn Fn(&[f64]) -> f64,
    dim: usize,
    q: &GridQuadrature,
    points: &[Vec<f64>],
    reference: Option<&dyn Fn(&[f64]) -> f64>,
) -> NumericTransform {
    let values: Vec<[f64; 2]> = points
        .iter()
        .map(|xi| {
            let phase = |x: &[f64]| -2.0 * PI * x.iter().zip(xi).map(|(a, b)| a * b).sum::<f64>();
            let re = q.integrate(dim, |x| f(x) * phase(x).cos());
            let im = q.integrate(dim, |x| f(x) * phase(x).sin());
            [re, im]
        })
        .collect();
    let max_deviation = reference.map(|r| {
        points
            .iter()
            .zip(&values)
            .map(|(xi, v)| (v[0] - r(xi)).hypot(v[1]))
            .fold(0.0, f64::max)
    });
    NumericTransform {
        points: points.to_vec(),
        values,
        boundary_max: q.boundary_max(dim, f),
        max_deviation,
    }
}

/// Points `-w, …, w` per axis, `m` per axis, as a tensor grid.
pub fn test_grid(dim: usize, half_width: f64, m: usize) -> Vec<Vec<f64>> {
    let axis: Vec<f64> = (0..m)
        .map(|i| {
            if m == 1 {
                0.0
            } else {
                -half_width + 2.0 * half_width * i as f64 / (m - 1) as f64
            }
        })
        .collect();
    let mut out = Vec::with_capacity(m.pow(dim as u32));
    for mut idx in 0..m.pow(dim as u32) {
        let mut p = Vec::with_capacity(dim);
        for _ in 0..dim {
            p.push(axis[idx % m]);
            idx /= m;
        }
        out.push(p);
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct CorestrictionProbe {
    pub k: usize,
    /// Schur complement, rows of the marginal form
    pub marginal_form: Vec<Vec<f64>>,
    pub test_points: usize,
    /// `∫ f(x + y) dy` over `H`, normalized at 0
    pub average_route: Vec<f64>,
    /// dual Gaussian restricted to `H⊥` and transformed back, normalized at 0
    pub fourier_route: Vec<f64>,
    pub closed_form: Vec<f64>,
    /// largest gap between the two numeric routes
    pub max_gap: f64,
    pub max_gap_to_closed_form: f64,
    pub identity_values: [f64; 2],
}

impl CorestrictionProbe {
    pub fn passed(&self, tol: f64) -> bool {
        self.max_gap < tol && self.max_gap_to_closed_form < tol
    }
}

/// Both corestriction routes for `H = {0} × R^{n-k}`, compared on a test
/// grid in the first `k` coordinates.
pub fn gaussian_corestriction_check(
    form: &QuadraticFormSpd,
    k: usize,
    q: &GridQuadrature,
) -> Result<CorestrictionProbe> {
    let n = form.dim();
    if k == 0 || k >= n {
        return Err(Error::Precondition(format!(
            "the split must keep between 1 and {} coordinates",
            n - 1
        )));
    }
    if n > 3 {
        return Err(Error::BoundExceeded {
            what: "dimension",
            actual: n,
            bound: 3,
        });
    }
    let schur = form.schur_complement(k)?;
    let dual = form.inverse();
    let dual_block = dual.principal(&(0..k).collect::<Vec<_>>())?;
    let points = test_grid(k, 1.0, if k == 1 { 17 } else { 9 });

    let joined = |x: &[f64], y: &[f64]| -> Vec<f64> { x.iter().chain(y).copied().collect() };
    let marginal = |x: &[f64]| q.integrate(n - k, |y| form.gaussian(&joined(x, y)));
    let back = |x: &[f64]| {
        q.integrate(k, |eta| {
            let phase = 2.0 * PI * eta.iter().zip(x).map(|(a, b)| a * b).sum::<f64>();
            dual_block.gaussian(eta) * phase.cos()
        })
    };
    let zero = vec![0.0; k];
    let (m0, b0) = (marginal(&zero), back(&zero));
    let average_route: Vec<f64> = points.iter().map(|x| marginal(x) / m0).collect();
    let fourier_route: Vec<f64> = points.iter().map(|x| back(x) / b0).collect();
    let closed_form: Vec<f64> = points.iter().map(|x| schur.gaussian(x)).collect();
    let gap = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    Ok(CorestrictionProbe {
        k,
        marginal_form: schur.rows(),
        test_points: points.len(),
        max_gap: gap(&average_route, &fourier_route),
        max_gap_to_closed_form: gap(&average_route, &closed_form).max(gap(&fourier_route, &closed_form)),
        identity_values: [marginal(&zero) / m0, back(&zero) / b0],
        average_route,
        fourier_route,
        closed_form,
    })
}

/// Partial sums of `Σ n⁻² exp(-π(n² x² + y²/n²))`.
#[derive(Clone, Debug, Serialize)]
pub struct CounterexampleProbe {
    pub terms: usize,
    pub total_mass: f64,
    pub total_mass_closed: f64,
    /// integral over the line `x = 0`
    pub restricted_mass: f64,
    pub restricted_mass_closed: f64,
    pub ratio: f64,
    /// every term is a positive multiple of a Gaussian
    pub partial_sum_ppd: bool,
    /// `max |f̂(ξ, η) - f(η, ξ)|` over the test points
    pub transform_symmetry_gap: f64,
}

pub fn counterexample_value(terms: usize, x: f64, y: f64) -> f64 {
    (1..=terms)
        .map(|n| {
            let n = n as f64;
            (-PI * (n * n * x * x + y * y / (n * n))).exp() / (n * n)
        })
        .collect::<Vec<_>>()
        .iter()
        .sum()
}

pub fn counterexample_probe(terms: usize, q: &GridQuadrature) -> Result<CounterexampleProbe> {
    if terms < 2 {
        return Err(Error::Precondition("at least two terms".into()));
    }
    let mut total = Vec::with_capacity(terms);
    let mut restricted = Vec::with_capacity(terms);
    for n in 1..=terms {
        let n = n as f64;
        let gx = q.scaled(1.0 / n).integrate_1d(|x| (-PI * n * n * x * x).exp());
        let gy = q.scaled(n).integrate_1d(|y| (-PI * y * y / (n * n)).exp());
        total.push(gx * gy / (n * n));
        restricted.push(gy / (n * n));
    }
    let total_mass = pairwise_sum(&total);
    let restricted_mass = pairwise_sum(&restricted);
    let total_closed: Vec<f64> = (1..=terms).map(|n| 1.0 / (n * n) as f64).collect();
    let restricted_closed: Vec<f64> = (1..=terms).map(|n| 1.0 / n as f64).collect();

    let mut gap = 0.0f64;
    for p in test_grid(2, 1.0, 5) {
        let (xi, eta) = (p[0], p[1]);
        let terms_hat: Vec<f64> = (1..=terms)
            .map(|n| {
                let n = n as f64;
                let fx = q
                    .scaled(1.0 / n)
                    .integrate_1d(|x| (-PI * n * n * x * x).exp() * (2.0 * PI * x * xi).cos());
                let fy = q
                    .scaled(n)
                    .integrate_1d(|y| (-PI * y * y / (n * n)).exp() * (2.0 * PI * y * eta).cos());
                fx * fy / (n * n)
            })
            .collect();
        gap = gap.max((pairwise_sum(&terms_hat) - counterexample_value(terms, eta, xi)).abs());
    }
    Ok(CounterexampleProbe {
        terms,
        total_mass,
        total_mass_closed: pairwise_sum(&total_closed),
        restricted_mass,
        restricted_mass_closed: pairwise_sum(&restricted_closed),
        ratio: restricted_mass / total_mass,
        partial_sum_ppd: true,
        transform_symmetry_gap: gap,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeCheck {
    pub name: String,
    pub passed: bool,
    pub value: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GaussianVerdict {
    pub amplitude: f64,
    pub checks: Vec<ProbeCheck>,
    pub good: bool,
    pub extremality: &'static str,
}

/// Theta sum `Σ_{m ∈ Z^k} exp(-π mᵀ A m)`.
pub fn lattice_theta(form: &QuadraticFormSpd) -> f64 {
    let k = form.dim();
    // exp(-π λ_min |m|²) < 1e-20 once |m|² λ_min > 15
    let lambda = form.matrix().symmetric_eigenvalues().min();
    let radius = (15.0 / lambda).sqrt().ceil() as i64 + 1;
    let side = (2 * radius + 1) as usize;
    let mut terms = Vec::with_capacity(side.pow(k as u32));
    for mut idx in 0..side.pow(k as u32) {
        let m: Vec<f64> = (0..k)
            .map(|_| {
                let c = (idx % side) as i64 - radius;
                idx /= side;
                c as f64
            })
            .collect();
        terms.push(form.gaussian(&m));
    }
    pairwise_sum(&terms)
}

fn coordinate_subsets(n: usize) -> Vec<Vec<usize>> {
    (1..1usize << n)
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
        .collect()
}

/// Goodness conditions for `amplitude · exp(-π xᵀ A x)` checked in closed form.
pub fn gaussian_goodness_probe(form: &QuadraticFormSpd, amplitude: f64) -> Result<GaussianVerdict> {
    if !(amplitude > 0.0 && amplitude.is_finite()) {
        return Err(Error::Precondition("amplitude must be positive".into()));
    }
    let n = form.dim();
    if n > 4 {
        return Err(Error::BoundExceeded {
            what: "dimension",
            actual: n,
            bound: 4,
        });
    }
    let t = gaussian_fourier_closed_form(form);
    let mut checks = vec![
        ProbeCheck {
            name: "function strictly positive".into(),
            passed: true,
            value: Some(amplitude),
        },
        ProbeCheck {
            name: "transform strictly positive".into(),
            passed: t.amplitude > 0.0,
            value: Some(amplitude * t.amplitude),
        },
        ProbeCheck {
            name: "integrable".into(),
            passed: true,
            value: Some(amplitude * t.amplitude),
        },
        ProbeCheck {
            name: "transform integrable".into(),
            passed: true,
            value: Some(amplitude),
        },
    ];
    for (side, f) in [("function", form), ("transform", &t.form)] {
        for coords in coordinate_subsets(n) {
            let label: Vec<String> = coords.iter().map(|c| format!("x{c}")).collect();
            let sub = f.principal(&coords);
            checks.push(ProbeCheck {
                name: format!("{side} integrable on the span of {}", label.join(",")),
                passed: sub.is_ok(),
                value: sub.as_ref().ok().map(|s| s.determinant().powf(-0.5)),
            });
            let theta = sub.as_ref().ok().map(lattice_theta);
            checks.push(ProbeCheck {
                name: format!("{side} summable on the lattice of {}", label.join(",")),
                passed: theta.is_some_and(f64::is_finite),
                value: theta,
            });
        }
    }
    Ok(GaussianVerdict {
        amplitude,
        good: checks.iter().all(|c| c.passed),
        checks,
        extremality: "not machine-checked",
    })
}
