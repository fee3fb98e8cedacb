//! The contraction map λ(x) = x* e^{−|x*−x|/n} on R⁴ and its fixed-point theory.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vec4 = [f64; 4];

pub fn norm(v: &Vec4) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}

pub fn distance(a: &Vec4, b: &Vec4) -> f64 {
    norm(&sub(a, b))
}

fn sub(a: &Vec4, b: &Vec4) -> Vec4 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]]
}

fn finite(v: &Vec4) -> bool {
    v.iter().all(|c| c.is_finite())
}

/// `count` points uniform in the closed unit 4-ball, by rejection from the cube.
pub fn sample_unit_ball(seed: u64, count: usize) -> Vec<Vec4> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p: Vec4 = [(); 4].map(|_| rng.gen_range(-1.0..=1.0));
        if norm(&p) <= 1.0 {
            out.push(p);
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContractionMap {
    center: Vec4,
    n: u64,
}

impl ContractionMap {
    pub fn new(center: Vec4, n: u64) -> Result<Self> {
        if n < 1 {
            return Err(Error::invalid("scale n must be at least 1"));
        }
        if !finite(&center) {
            return Err(Error::invalid("center must be finite"));
        }
        Ok(Self { center, n })
    }

    pub fn center(&self) -> Vec4 {
        self.center
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Ball radius r_n = 1/n.
    pub fn radius(&self) -> f64 {
        1.0 / self.n as f64
    }

    /// The global Lipschitz bound |x*|/n.
    pub fn lipschitz_bound(&self) -> f64 {
        norm(&self.center) / self.n as f64
    }

    pub fn eval(&self, x: Vec4) -> Result<Vec4> {
        if !finite(&x) {
            return Err(Error::invalid("non-finite point"));
        }
        Ok(self.apply(&x))
    }

    fn apply(&self, x: &Vec4) -> Vec4 {
        let s = (-distance(&self.center, x) / self.n as f64).exp();
        self.center.map(|c| c * s)
    }

    /// The map in center-relative coordinates: δ ↦ λ(x* + δ) − x*.
    fn apply_offset(&self, delta: &Vec4) -> Vec4 {
        let s = (-norm(delta) / self.n as f64).exp_m1();
        self.center.map(|c| c * s)
    }

    /// Closed-form Jacobian −(1/n) e^{−r/n} x* ⊗ (x − x*)/r; `None` at x = x*.
    pub fn jacobian_exact(&self, x: Vec4) -> Option<[[f64; 4]; 4]> {
        let r = distance(&x, &self.center);
        if r == 0.0 {
            return None;
        }
        let n = self.n as f64;
        let s = -(-r / n).exp() / (n * r);
        let mut j = [[0.0; 4]; 4];
        for (i, row) in j.iter_mut().enumerate() {
            for (k, e) in row.iter_mut().enumerate() {
                *e = s * self.center[i] * (x[k] - self.center[k]);
            }
        }
        Some(j)
    }

    /// Centred finite-difference Jacobian with step `step`.
    pub fn jacobian_fd(&self, x: Vec4, step: f64) -> [[f64; 4]; 4] {
        let mut j = [[0.0; 4]; 4];
        for k in 0..4 {
            let mut fwd = x;
            let mut bwd = x;
            fwd[k] += step;
            bwd[k] -= step;
            let a = self.apply(&fwd);
            let b = self.apply(&bwd);
            for i in 0..4 {
                j[i][k] = (a[i] - b[i]) / (2.0 * step);
            }
        }
        j
    }

    /// Spectral norm of the Jacobian at `x`.
    pub fn jacobian_norm(&self, x: Vec4) -> Result<JacobianNorm> {
        if !finite(&x) {
            return Err(Error::invalid("non-finite point"));
        }
        let closed_form = self.lipschitz_bound() * (-distance(&x, &self.center) / self.n as f64).exp();
        if x == self.center {
            return Ok(JacobianNorm {
                norm: self.lipschitz_bound(),
                closed_form: self.lipschitz_bound(),
                second_singular_value: 0.0,
                non_smooth: true,
            });
        }
        let sv = singular_values(&self.jacobian_fd(x, 1e-5));
        Ok(JacobianNorm {
            norm: sv[0],
            closed_form,
            second_singular_value: sv[1],
            non_smooth: false,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JacobianNorm {
    /// Largest singular value of the finite-difference Jacobian.
    pub norm: f64,
    /// (|x*|/n) e^{−r/n}.
    pub closed_form: f64,
    pub second_singular_value: f64,
    /// Set at x = x*, where the map is Lipschitz but not differentiable;
    /// `norm` is then the limiting bound.
    pub non_smooth: bool,
}

/// Singular values of a 4×4 real matrix, descending (cyclic Jacobi on JᵀJ).
pub fn singular_values(j: &[[f64; 4]; 4]) -> [f64; 4] {
    let mut a = [[0.0; 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            a[r][c] = (0..4).map(|k| j[k][r] * j[k][c]).sum();
        }
    }
    for _sweep in 0..50 {
        let off: f64 = (0..4)
            .flat_map(|p| (0..4).map(move |q| (p, q)))
            .filter(|(p, q)| p != q)
            .map(|(p, q)| a[p][q] * a[p][q])
            .sum();
        if off < 1e-300 {
            break;
        }
        for p in 0..3 {
            for q in p + 1..4 {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..4 {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..4 {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut sv = [0, 1, 2, 3].map(|i| a[i][i].max(0.0).sqrt());
    sv.sort_by(|x, y| y.total_cmp(x));
    sv
}

/// Validity certificate: the map contracts iff |x*|/n < 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub valid: bool,
    pub bound: f64,
}

pub fn contraction_validity(map: &ContractionMap) -> Certificate {
    let bound = map.lipschitz_bound();
    Certificate {
        valid: bound < 1.0,
        bound,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: Vec4,
    pub radius: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LipschitzEstimate {
    /// max over sampled pairs of |λx − λx′| / |x − x′|.
    pub estimate: f64,
    /// |x*|/n, valid on all of R⁴.
    pub global_bound: f64,
    /// sup of ‖J‖ over the sampled ball.
    pub ball_bound: f64,
    pub pairs: usize,
    pub seed: u64,
}

/// Sampled Lipschitz ratio over `pairs` independent uniform pairs in `ball`.
pub fn lipschitz_estimate(
    map: &ContractionMap,
    ball: Ball,
    pairs: usize,
    seed: u64,
) -> Result<LipschitzEstimate> {
    if pairs < 1 {
        return Err(Error::invalid("need at least one sample pair"));
    }
    if !(ball.radius > 0.0 && ball.radius.is_finite()) || !finite(&ball.center) {
        return Err(Error::invalid("ball radius must be positive and finite"));
    }
    let pts = sample_unit_ball(seed, 2 * pairs);
    let place = |u: &Vec4| -> Vec4 {
        [0, 1, 2, 3].map(|i| ball.center[i] + ball.radius * u[i])
    };
    let mut estimate = 0.0_f64;
    for pair in pts.chunks_exact(2) {
        let x = place(&pair[0]);
        let y = place(&pair[1]);
        let d = distance(&x, &y);
        if d > 0.0 {
            estimate = estimate.max(distance(&map.apply(&x), &map.apply(&y)) / d);
        }
    }
    let r_min = (distance(&ball.center, &map.center) - ball.radius).max(0.0);
    Ok(LipschitzEstimate {
        estimate,
        global_bound: map.lipschitz_bound(),
        ball_bound: map.lipschitz_bound() * (-r_min / map.n as f64).exp(),
        pairs,
        seed,
    })
}

/// Iterates x_0, x_1 = λ(x_0), ... with step distances d_k = |x_{k+1} − x_k|.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationTrace {
    pub iterates: Vec<Vec4>,
    pub distances: Vec<f64>,
    pub converged: bool,
    /// False when the validity certificate did not hold at the start.
    pub guaranteed: bool,
    pub bound: f64,
}

impl IterationTrace {
    /// The index k of the first d_k below tolerance, or the number of steps
    /// taken when the run did not converge.
    pub fn steps(&self) -> usize {
        if self.converged {
            self.distances.len() - 1
        } else {
            self.distances.len()
        }
    }

    pub fn last_distance(&self) -> f64 {
        self.distances.last().copied().unwrap_or(0.0)
    }

    /// x̂ with |λ(x̂) − x̂| below tolerance.
    pub fn final_iterate(&self) -> Vec4 {
        self.iterates[self.steps()]
    }

    /// d_{k+1}/d_k for every k with d_k > 0 and d_{k+1} > 0.
    pub fn ratios(&self) -> Vec<f64> {
        self.distances
            .windows(2)
            .filter(|w| w[0] > 0.0 && w[1] > 0.0)
            .map(|w| w[1] / w[0])
            .collect()
    }

    /// Median step ratio q̂.
    pub fn measured_ratio(&self) -> Option<f64> {
        let mut r = self.ratios();
        if r.is_empty() {
            return None;
        }
        r.sort_by(f64::total_cmp);
        let m = r.len() / 2;
        Some(if r.len() % 2 == 1 {
            r[m]
        } else {
            0.5 * (r[m - 1] + r[m])
        })
    }

    pub fn max_ratio(&self) -> Option<f64> {
        self.ratios().into_iter().reduce(f64::max)
    }

    /// A-priori bound q/(1−q)·|x_k − x_{k−1}| on the distance of x̂ from the fixed point.
    pub fn error_bound(&self) -> f64 {
        let k = self.steps();
        if k == 0 || self.bound >= 1.0 {
            return if k == 0 { 0.0 } else { f64::INFINITY };
        }
        self.bound / (1.0 - self.bound) * self.distances[k - 1]
    }

    /// Columns `k,x1,x2,x3,x4,d_k,ratio`; empty cells where undefined.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "k,x1,x2,x3,x4,d_k,ratio")?;
        for (k, x) in self.iterates.iter().enumerate() {
            let mut line = format!("{k},{:?},{:?},{:?},{:?},", x[0], x[1], x[2], x[3]);
            if let Some(d) = self.distances.get(k) {
                let _ = write!(line, "{d:?}");
            }
            line.push(',');
            if k > 0 {
                if let (Some(d), Some(prev)) = (self.distances.get(k), self.distances.get(k - 1)) {
                    if *prev > 0.0 {
                        let _ = write!(line, "{:?}", d / prev);
                    }
                }
            }
            writeln!(out, "{line}")?;
        }
        Ok(())
    }
}

/// Rows of an iteration CSV: (k, x_k, d_k, ratio).
pub type TraceRow = (usize, Vec4, Option<f64>, Option<f64>);

pub fn read_trace_csv<R: BufRead>(input: R) -> Result<Vec<TraceRow>> {
    let mut lines = input.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty trace".into()))??;
    if header.trim() != "k,x1,x2,x3,x4,d_k,ratio" {
        return Err(Error::Parse(format!("unexpected trace header {header:?}")));
    }
    let num = |s: &str| -> Result<f64> {
        s.parse::<f64>()
            .map_err(|e| Error::Parse(format!("bad number {s:?}: {e}")))
    };
    let opt = |s: &str| -> Result<Option<f64>> {
        if s.is_empty() {
            Ok(None)
        } else {
            num(s).map(Some)
        }
    };
    let mut rows = Vec::new();
    for line in lines {
        let line = line?;
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 7 {
            return Err(Error::Parse(format!("expected 7 cells, got {}", cells.len())));
        }
        let k = cells[0]
            .parse::<usize>()
            .map_err(|e| Error::Parse(format!("bad index: {e}")))?;
        let x = [num(cells[1])?, num(cells[2])?, num(cells[3])?, num(cells[4])?];
        rows.push((k, x, opt(cells[5])?, opt(cells[6])?));
    }
    Ok(rows)
}

/// Banach iteration until |x_{k+1} − x_k| < tol, applying the map at most `max_iter` times.
pub fn banach_iterate(
    map: &ContractionMap,
    x0: Vec4,
    tol: f64,
    max_iter: usize,
) -> Result<IterationTrace> {
    if !finite(&x0) {
        return Err(Error::invalid("non-finite start point"));
    }
    if !(tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let cert = contraction_validity(map);
    let mut trace = IterationTrace {
        iterates: vec![x0],
        distances: Vec::new(),
        converged: false,
        guaranteed: cert.valid,
        bound: cert.bound,
    };
    // Iterating the offset δ = x − x* keeps step distances accurate down to
    // rounding of δ itself rather than of x.
    let c = map.center;
    let mut delta = sub(&x0, &c);
    for _ in 0..max_iter {
        let next = map.apply_offset(&delta);
        let d = distance(&next, &delta);
        trace.iterates.push([0, 1, 2, 3].map(|i| c[i] + next[i]));
        trace.distances.push(d);
        if d < tol {
            trace.converged = true;
            return Ok(trace);
        }
        delta = next;
    }
    Err(Error::NonConvergence {
        trace: Box::new(trace),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitSeries {
    pub ns: Vec<u64>,
    /// |λ_n(x) − x*| per n.
    pub deviations: Vec<f64>,
    pub monotone: bool,
    /// n·|λ_n(x) − x*| / (|x*| r), tending to 1 from below.
    pub first_order_ratio: Vec<f64>,
}

/// Approach of λ_n(x) to x* as n grows.
pub fn limit_large_n(center: Vec4, x: Vec4, ns: &[u64]) -> Result<LimitSeries> {
    if ns.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("n sequence must be strictly increasing"));
    }
    let r = distance(&center, &x);
    let scale = norm(&center) * r;
    let mut deviations = Vec::with_capacity(ns.len());
    let mut first_order_ratio = Vec::with_capacity(ns.len());
    for &n in ns {
        let map = ContractionMap::new(center, n)?;
        let dev = distance(&map.eval(x)?, &center);
        deviations.push(dev);
        first_order_ratio.push(if scale > 0.0 { n as f64 * dev / scale } else { 0.0 });
    }
    let monotone = deviations.windows(2).all(|w| w[1] <= w[0]);
    Ok(LimitSeries {
        ns: ns.to_vec(),
        deviations,
        monotone,
        first_order_ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const E1: Vec4 = [1.0, 0.0, 0.0, 0.0];

    fn map(center: Vec4, n: u64) -> ContractionMap {
        ContractionMap::new(center, n).unwrap()
    }

    #[test]
    fn eval_examples() {
        let m = map(E1, 10);
        assert_eq!(m.eval(E1).unwrap(), E1);
        let y = m.eval([1.5, 0.0, 0.0, 0.0]).unwrap();
        assert!((y[0] - (-0.05f64).exp()).abs() < 1e-15);
        assert_eq!(&y[1..], &[0.0; 3]);
        let z = map([0.0; 4], 3);
        assert_eq!(z.eval([4.0, -1.0, 2.0, 0.5]).unwrap(), [0.0; 4]);
        assert!(m.eval([f64::NAN, 0.0, 0.0, 0.0]).is_err());
        assert!(ContractionMap::new(E1, 0).is_err());
        assert!(ContractionMap::new([f64::INFINITY, 0.0, 0.0, 0.0], 1).is_err());
    }

    #[test]
    fn jacobian_matches_closed_form() {
        let m = map(E1, 10);
        let x = [1.0, 1.0, 0.0, 0.0];
        let j = m.jacobian_norm(x).unwrap();
        let expect = 0.1 * (-0.1f64).exp();
        assert!((j.norm - expect).abs() < 1e-6);
        assert!((j.closed_form - expect).abs() < 1e-15);
        assert!(j.second_singular_value <= 1e-5);
        let exact = m.jacobian_exact(x).unwrap();
        assert!((singular_values(&exact)[0] - expect).abs() < 1e-14);
        let centre = m.jacobian_norm(E1).unwrap();
        assert!(centre.non_smooth);
        assert_eq!(centre.norm, 0.1);
        assert_eq!(map([0.0; 4], 2).jacobian_norm(x).unwrap().norm, 0.0);
    }

    #[test]
    fn singular_values_of_diagonal() {
        let d = [[3.0, 0.0, 0.0, 0.0], [0.0, -1.0, 0.0, 0.0], [0.0, 0.0, 2.0, 0.0], [0.0; 4]];
        let sv = singular_values(&d);
        for (a, b) in sv.iter().zip([3.0, 2.0, 1.0, 0.0]) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn validity_certificates() {
        let c = contraction_validity(&map(E1, 10));
        assert!(c.valid);
        assert!((c.bound - 0.1).abs() < 1e-16);
        let c1 = contraction_validity(&map(E1, 1));
        assert!(!c1.valid);
        assert_eq!(c1.bound, 1.0);
        assert_eq!(contraction_validity(&map([0.0; 4], 1)).bound, 0.0);
    }

    #[test]
    fn lipschitz_examples() {
        let m = map(E1, 10);
        let ball = Ball { center: E1, radius: 0.1 };
        let est = lipschitz_estimate(&m, ball, 10_000, 7).unwrap();
        assert!(est.estimate <= 0.1 + 1e-12);
        assert!(est.estimate >= 0.09, "{}", est.estimate);
        assert_eq!(est, lipschitz_estimate(&m, ball, 10_000, 7).unwrap());
        let zero = lipschitz_estimate(&map([0.0; 4], 10), ball, 100, 1).unwrap();
        assert_eq!(zero.estimate, 0.0);
        let wide = lipschitz_estimate(&map([5.0, 0.0, 0.0, 0.0], 1), Ball { center: [5.0, 0.0, 0.0, 0.0], radius: 1.0 }, 10_000, 3).unwrap();
        assert!(wide.estimate > 1.0);
        assert!(lipschitz_estimate(&m, Ball { center: E1, radius: 0.0 }, 10, 0).is_err());
    }

    #[test]
    fn banach_examples() {
        let m = map(E1, 10);
        let fixed = banach_iterate(&m, E1, 1e-12, 50).unwrap();
        assert_eq!(fixed.steps(), 0);
        assert_eq!(fixed.last_distance(), 0.0);

        let x0 = [1.09, 0.0, 0.0, 0.0];
        let t = banach_iterate(&m, x0, 1e-12, 100).unwrap();
        let d0 = t.distances[0];
        let limit = ((1e-12 / d0).ln() / 0.1f64.ln()).ceil() as usize + 2;
        assert!(t.steps() <= limit, "{} > {limit}", t.steps());
        let q = t.measured_ratio().unwrap();
        assert!(q > 0.0 && q <= 0.1);
        assert!(t.max_ratio().unwrap() <= 0.1 + 1e-9);
        let xh = t.final_iterate();
        assert!(distance(&m.eval(xh).unwrap(), &xh) < 1e-12);
        assert!(distance(&xh, &E1) <= t.error_bound() + 1e-15);

        let z = banach_iterate(&map([0.0; 4], 4), [3.0, 1.0, -2.0, 0.5], 1e-12, 10).unwrap();
        assert_eq!(z.steps(), 1);
        assert_eq!(z.final_iterate(), [0.0; 4]);
    }

    #[test]
    fn banach_reports_non_convergence() {
        // |x*|/n = 1: the fixed point is neutral and approached sublinearly
        let m = map(E1, 1);
        match banach_iterate(&m, [0.0; 4], 1e-12, 5) {
            Err(Error::NonConvergence { trace }) => {
                assert!(!trace.guaranteed);
                assert!(!trace.converged);
                assert_eq!(trace.steps(), 5);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn uniqueness_from_two_starts() {
        let m = map([0.3, -0.2, 0.1, 0.4], 3);
        let a = banach_iterate(&m, [0.5, 0.0, 0.0, 0.0], 1e-12, 200).unwrap();
        let b = banach_iterate(&m, [-0.1, 0.2, 0.3, 0.9], 1e-12, 200).unwrap();
        assert!(distance(&a.final_iterate(), &b.final_iterate()) <= 2e-12);
    }

    #[test]
    fn trace_csv_roundtrip() {
        let t = banach_iterate(&map(E1, 10), [1.09, 0.0, 0.0, 0.0], 1e-12, 100).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let rows = read_trace_csv(buf.as_slice()).unwrap();
        assert_eq!(rows.len(), t.iterates.len());
        for (k, (idx, x, d, _)) in rows.iter().enumerate() {
            assert_eq!(*idx, k);
            assert_eq!(*x, t.iterates[k]);
            assert_eq!(*d, t.distances.get(k).copied());
        }
        assert!(rows[0].3.is_none());
        assert!(read_trace_csv("k,x\n".as_bytes()).is_err());
    }

    #[test]
    fn large_n_limit() {
        let zero = limit_large_n(E1, E1, &[1, 2, 4]).unwrap();
        assert_eq!(zero.deviations, vec![0.0; 3]);
        let s = limit_large_n(E1, [2.0, 0.0, 0.0, 0.0], &[100, 200, 400, 800]).unwrap();
        assert!(s.monotone);
        for w in s.deviations.windows(2) {
            assert!((w[0] / w[1] - 2.0).abs() < 0.1);
        }
        for (d, n) in s.deviations.iter().zip(&s.ns) {
            assert!((d - (1.0 - (-1.0 / *n as f64).exp())).abs() < 1e-15);
        }
        assert!(limit_large_n(E1, E1, &[4, 2]).is_err());
    }

    proptest! {
        #[test]
        fn sampled_pairs_obey_bound(
            c in prop::array::uniform4(-3.0f64..3.0),
            n in 1u64..20,
            x in prop::array::uniform4(-3.0f64..3.0),
            y in prop::array::uniform4(-3.0f64..3.0),
        ) {
            let m = map(c, n);
            let lhs = distance(&m.eval(x).unwrap(), &m.eval(y).unwrap());
            prop_assert!(lhs <= m.lipschitz_bound() * distance(&x, &y) + 1e-12);
            let j = m.jacobian_norm(x).unwrap();
            prop_assert!(j.closed_form <= m.lipschitz_bound());
        }

        #[test]
        fn fixed_point_exact(c in prop::array::uniform4(-1e3f64..1e3), n in 1u64..1000) {
            let m = map(c, n);
            prop_assert_eq!(m.eval(c).unwrap(), c);
        }
    }
}
