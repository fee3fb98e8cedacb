//! Periodic 4D lattice geometry and central-difference operators.
//!
//! Axes are addressed `0..4`, standing for the Euclidean indices μ = 1..4.
//! Axis 3 (μ = 4) is the time axis when the Lorentzian metric is selected.
//! Linear point indices are row-major: axis 0 varies slowest, axis 3 fastest.

use std::f64::consts::TAU;
use std::fmt;
use std::io::{BufRead, Write};
use std::ops::{Add, Mul, Sub};
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const AXES: usize = 4;

/// Smallest per-axis extent for which the three-point stencils are meaningful.
pub const MIN_DIM: usize = 4;

/// Errors at or below this level are reported as exact by [`convergence_order`].
pub const ROUNDING_FLOOR: f64 = 1e-11;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    #[default]
    Euclidean,
    Lorentzian,
}

impl Metric {
    /// Diagonal metric weight η_μμ used for repeated-index contractions.
    pub fn weight(self, axis: usize) -> f64 {
        match self {
            Metric::Euclidean => 1.0,
            Metric::Lorentzian if axis == AXES - 1 => 1.0,
            Metric::Lorentzian => -1.0,
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Euclidean => "euclidean",
            Metric::Lorentzian => "lorentzian",
        })
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euclidean" => Ok(Metric::Euclidean),
            "lorentzian" => Ok(Metric::Lorentzian),
            other => Err(Error::invalid(format!("unknown metric `{other}`"))),
        }
    }
}

/// Uniform periodic lattice with spacing `h` on every axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid4 {
    dims: [usize; AXES],
    h: f64,
    #[serde(default)]
    metric: Metric,
}

impl Grid4 {
    pub fn new(dims: [usize; AXES], h: f64) -> Result<Self> {
        if let Some(d) = dims.iter().find(|&&d| d < MIN_DIM) {
            return Err(Error::invalid(format!(
                "grid extent {d} below minimum {MIN_DIM}"
            )));
        }
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::invalid(format!("grid spacing {h} must be finite and positive")));
        }
        Ok(Self {
            dims,
            h,
            metric: Metric::Euclidean,
        })
    }

    /// `n⁴` points covering one 2π period per axis.
    pub fn cubic(n: usize) -> Result<Self> {
        Self::new([n; AXES], TAU / n as f64)
    }

    pub fn with_metric(mut self, metric: Metric) -> Self {
        self.metric = metric;
        self
    }

    pub fn dims(&self) -> [usize; AXES] {
        self.dims
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn len(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Physical length of one axis.
    pub fn extent(&self, axis: usize) -> f64 {
        self.dims[axis] as f64 * self.h
    }

    fn stride(&self, axis: usize) -> usize {
        self.dims[axis + 1..].iter().product()
    }

    pub fn coords(&self, idx: usize) -> [usize; AXES] {
        let mut out = [0; AXES];
        let mut rest = idx;
        for axis in (0..AXES).rev() {
            out[axis] = rest % self.dims[axis];
            rest /= self.dims[axis];
        }
        out
    }

    pub fn index(&self, coords: [usize; AXES]) -> usize {
        coords
            .iter()
            .zip(self.dims.iter())
            .fold(0, |acc, (&c, &d)| acc * d + c % d)
    }

    /// Position x_μ = i_μ h of a lattice point.
    pub fn position(&self, idx: usize) -> [f64; AXES] {
        self.coords(idx).map(|c| c as f64 * self.h)
    }

    /// Periodic neighbour one step forward (`+1`) or backward (`-1`) along `axis`.
    fn neighbour(&self, idx: usize, axis: usize, forward: bool) -> usize {
        let stride = self.stride(axis);
        let n = self.dims[axis];
        let c = (idx / stride) % n;
        if forward {
            if c + 1 == n {
                idx + stride - n * stride
            } else {
                idx + stride
            }
        } else if c == 0 {
            idx + (n - 1) * stride
        } else {
            idx - stride
        }
    }

    /// Same sampling of the same domain (metric may differ).
    pub fn same_shape(&self, other: &Grid4) -> bool {
        self.dims == other.dims && self.h == other.h
    }

    fn check_axis(axis: usize) -> Result<()> {
        if axis >= AXES {
            return Err(Error::invalid(format!("axis {axis} out of range 0..{AXES}")));
        }
        Ok(())
    }
}

/// Values the stencils can act on: anything closed under addition and real scaling.
pub trait Linear: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {}

impl<T> Linear for T where T: Copy + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T> {}

/// Pointwise size used by max-norms.
pub trait Magnitude {
    fn magnitude(&self) -> f64;
}

impl Magnitude for f64 {
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Magnitude for Complex64 {
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// One value per lattice point.
#[derive(Clone, Debug, PartialEq)]
pub struct Field<T> {
    grid: Grid4,
    data: Vec<T>,
}

pub type RealField = Field<f64>;
pub type ComplexField = Field<Complex64>;

/// Four component fields indexed by μ (A_μ, j_μ, λ_μ).
pub type VectorField<T> = [Field<T>; AXES];

impl<T: Copy> Field<T> {
    pub fn from_fn(grid: Grid4, mut f: impl FnMut([f64; AXES]) -> T) -> Self {
        let data = (0..grid.len()).map(|i| f(grid.position(i))).collect();
        Self { grid, data }
    }

    pub fn from_index_fn(grid: Grid4, f: impl FnMut(usize) -> T) -> Self {
        let data = (0..grid.len()).map(f).collect();
        Self { grid, data }
    }

    pub fn constant(grid: Grid4, value: T) -> Self {
        Self {
            grid,
            data: vec![value; grid.len()],
        }
    }

    pub fn from_vec(grid: Grid4, data: Vec<T>) -> Result<Self> {
        if data.len() != grid.len() {
            return Err(Error::dimension(format!(
                "{} values for a grid of {} points",
                data.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, data })
    }

    pub fn grid(&self) -> &Grid4 {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.data
    }

    pub fn into_values(self) -> Vec<T> {
        self.data
    }

    pub fn at(&self, idx: usize) -> T {
        self.data[idx]
    }

    pub fn map<U: Copy>(&self, f: impl FnMut(&T) -> U) -> Field<U> {
        Field {
            grid: self.grid,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn zip_map<U: Copy, V: Copy>(
        &self,
        other: &Field<U>,
        mut f: impl FnMut(T, U) -> V,
    ) -> Result<Field<V>> {
        ensure_same_grid(&self.grid, &other.grid)?;
        Ok(Field {
            grid: self.grid,
            data: self
                .data
                .iter()
                .zip(other.data.iter())
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }
}

impl<T: Copy + Magnitude> Field<T> {
    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(Magnitude::magnitude).fold(0.0, f64::max)
    }
}

impl<T: Linear + Magnitude> Field<T> {
    /// max_x |a(x) − b(x)|.
    pub fn max_abs_diff(&self, other: &Field<T>) -> Result<f64> {
        ensure_same_grid(&self.grid, &other.grid)?;
        Ok(self
            .data
            .iter()
            .zip(other.data.iter())
            .map(|(&a, &b)| (a - b).magnitude())
            .fold(0.0, f64::max))
    }
}

impl ComplexField {
    pub fn from_real(f: &RealField) -> Self {
        f.map(|&x| Complex64::new(x, 0.0))
    }

    pub fn re(&self) -> RealField {
        self.map(|z| z.re)
    }
}

pub(crate) fn ensure_same_grid(a: &Grid4, b: &Grid4) -> Result<()> {
    if a.same_shape(b) {
        Ok(())
    } else {
        Err(Error::dimension(format!(
            "grids {:?} h={} and {:?} h={} differ",
            a.dims, a.h, b.dims, b.h
        )))
    }
}

/// Max-norm over all four components.
pub fn vector_max_norm<T: Copy + Magnitude>(v: &VectorField<T>) -> f64 {
    v.iter().map(Field::max_norm).fold(0.0, f64::max)
}

pub fn vector_max_abs_diff<T: Linear + Magnitude>(
    a: &VectorField<T>,
    b: &VectorField<T>,
) -> Result<f64> {
    let mut worst = 0.0_f64;
    for (x, y) in a.iter().zip(b.iter()) {
        worst = worst.max(x.max_abs_diff(y)?);
    }
    Ok(worst)
}

/// Central difference (f(x + h e_μ) − f(x − h e_μ)) / 2h with periodic wrap.
pub fn partial<T: Linear>(f: &Field<T>, axis: usize) -> Result<Field<T>> {
    Grid4::check_axis(axis)?;
    let grid = f.grid;
    let scale = 0.5 / grid.h;
    Ok(Field::from_index_fn(grid, |i| {
        let fwd = f.data[grid.neighbour(i, axis, true)];
        let bwd = f.data[grid.neighbour(i, axis, false)];
        (fwd - bwd) * scale
    }))
}

/// Direct second difference (f(x+h) − 2f(x) + f(x−h)) / h² along one axis.
pub fn second_difference<T: Linear>(f: &Field<T>, axis: usize) -> Result<Field<T>> {
    Grid4::check_axis(axis)?;
    let grid = f.grid;
    let scale = 1.0 / (grid.h * grid.h);
    Ok(Field::from_index_fn(grid, |i| {
        let fwd = f.data[grid.neighbour(i, axis, true)];
        let bwd = f.data[grid.neighbour(i, axis, false)];
        let mid = f.data[i];
        (fwd - mid - mid + bwd) * scale
    }))
}

fn weighted_second_sum<T: Linear>(f: &Field<T>, axes: &[usize], metric: Metric) -> Field<T> {
    let grid = f.grid;
    let scale = 1.0 / (grid.h * grid.h);
    Field::from_index_fn(grid, |i| {
        let mid = f.data[i];
        let mut acc = mid * 0.0;
        for &axis in axes {
            let fwd = f.data[grid.neighbour(i, axis, true)];
            let bwd = f.data[grid.neighbour(i, axis, false)];
            acc = acc + (fwd - mid - mid + bwd) * (scale * metric.weight(axis));
        }
        acc
    })
}

/// □f = Σ_μ η_μμ ∂_μ² f using the direct second difference; the metric comes from the grid.
pub fn dalembertian<T: Linear>(f: &Field<T>) -> Field<T> {
    weighted_second_sum(f, &[0, 1, 2, 3], f.grid.metric)
}

/// Δf = Σ_{i=1..3} ∂_i² f (spatial axes only, always positive-definite).
pub fn laplacian_spatial<T: Linear>(f: &Field<T>) -> Field<T> {
    weighted_second_sum(f, &[0, 1, 2], Metric::Euclidean)
}

/// Σ_μ ∂_μ V_μ.
pub fn divergence<T: Linear>(v: &VectorField<T>) -> Result<Field<T>> {
    divergence_with(v, Metric::Euclidean)
}

/// Σ_μ η_μμ ∂_μ V_μ.
pub fn divergence_with<T: Linear>(v: &VectorField<T>, metric: Metric) -> Result<Field<T>> {
    for comp in &v[1..] {
        ensure_same_grid(&v[0].grid, &comp.grid)?;
    }
    let grid = v[0].grid;
    let scale = 0.5 / grid.h;
    Ok(Field::from_index_fn(grid, |i| {
        let mut acc = v[0].data[i] * 0.0;
        for (axis, comp) in v.iter().enumerate() {
            let fwd = comp.data[grid.neighbour(i, axis, true)];
            let bwd = comp.data[grid.neighbour(i, axis, false)];
            acc = acc + (fwd - bwd) * (scale * metric.weight(axis));
        }
        acc
    }))
}

/// Outcome of a grid-refinement study.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Convergence {
    /// Least-squares slope of log(error) against log(h).
    Order { order: f64 },
    /// Every error sits at rounding level; the operator is exact on this input.
    Exact,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceStudy {
    pub resolutions: Vec<usize>,
    pub spacings: Vec<f64>,
    pub errors: Vec<f64>,
    pub outcome: Convergence,
}

impl ConvergenceStudy {
    pub fn order(&self) -> Option<f64> {
        match self.outcome {
            Convergence::Order { order } => Some(order),
            Convergence::Exact => None,
        }
    }

    /// True when the measured order lies in `target ± band`, or the run was exact.
    pub fn within(&self, target: f64, band: f64) -> bool {
        match self.outcome {
            Convergence::Order { order } => (order - target).abs() <= band,
            Convergence::Exact => true,
        }
    }
}

/// Slope of the least-squares line through (log x, log y).
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::invalid("log-log fit needs at least two paired samples"));
    }
    if xs.iter().chain(ys.iter()).any(|&v| !(v > 0.0 && v.is_finite())) {
        return Err(Error::invalid("log-log fit needs positive finite samples"));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(sxy / sxx)
}

/// Runs `error_at` on cubic 2π-periodic grids of the given resolutions and
/// fits the order of the max-norm error.
pub fn convergence_order(
    resolutions: &[usize],
    mut error_at: impl FnMut(&Grid4) -> Result<f64>,
) -> Result<ConvergenceStudy> {
    if resolutions.len() < 3 {
        return Err(Error::invalid(format!(
            "convergence study needs at least 3 resolutions, got {}",
            resolutions.len()
        )));
    }
    let mut spacings = Vec::with_capacity(resolutions.len());
    let mut errors = Vec::with_capacity(resolutions.len());
    for &n in resolutions {
        let grid = Grid4::cubic(n)?;
        spacings.push(grid.h());
        errors.push(error_at(&grid)?);
    }
    let outcome = if errors.iter().all(|&e| e <= ROUNDING_FLOOR) {
        Convergence::Exact
    } else {
        Convergence::Order {
            order: loglog_slope(&spacings, &errors)?,
        }
    };
    Ok(ConvergenceStudy {
        resolutions: resolutions.to_vec(),
        spacings,
        errors,
        outcome,
    })
}

/// Named real-valued columns over one grid, the on-disk layout for field dumps.
///
/// ```text
/// # dims=16,16,16,16 h=0.39269908169872414 metric=euclidean
/// i1,i2,i3,i4,<column>,...
/// 0,0,0,0,<value>,...
/// ```
#[derive(Clone, Debug, PartialEq)]
pub struct FieldTable {
    pub grid: Grid4,
    pub columns: Vec<(String, Vec<f64>)>,
}

impl FieldTable {
    pub fn new(grid: Grid4) -> Self {
        Self {
            grid,
            columns: Vec::new(),
        }
    }

    pub fn push_real(&mut self, name: &str, f: &RealField) -> Result<()> {
        ensure_same_grid(&self.grid, f.grid())?;
        self.columns.push((name.to_owned(), f.values().to_vec()));
        Ok(())
    }

    /// Adds `<name>_re` and `<name>_im` columns.
    pub fn push_complex(&mut self, name: &str, f: &ComplexField) -> Result<()> {
        ensure_same_grid(&self.grid, f.grid())?;
        self.columns
            .push((format!("{name}_re"), f.values().iter().map(|z| z.re).collect()));
        self.columns
            .push((format!("{name}_im"), f.values().iter().map(|z| z.im).collect()));
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_slice())
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let d = self.grid.dims();
        writeln!(
            out,
            "# dims={},{},{},{} h={:?} metric={}",
            d[0],
            d[1],
            d[2],
            d[3],
            self.grid.h(),
            self.grid.metric()
        )?;
        write!(out, "i1,i2,i3,i4")?;
        for (name, _) in &self.columns {
            write!(out, ",{name}")?;
        }
        writeln!(out)?;
        for idx in 0..self.grid.len() {
            let c = self.grid.coords(idx);
            write!(out, "{},{},{},{}", c[0], c[1], c[2], c[3])?;
            for (_, values) in &self.columns {
                write!(out, ",{:?}", values[idx])?;
            }
            writeln!(out)?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty input".into()))??;
        let grid = parse_grid_header(&header)?;
        let names_line = lines
            .next()
            .ok_or_else(|| Error::Parse("missing column header".into()))??;
        let names: Vec<&str> = names_line.split(',').collect();
        if names.len() < 4 || names[..4] != ["i1", "i2", "i3", "i4"] {
            return Err(Error::Parse(format!("bad column header `{names_line}`")));
        }
        let mut columns: Vec<(String, Vec<f64>)> = names[4..]
            .iter()
            .map(|n| (n.to_string(), Vec::with_capacity(grid.len())))
            .collect();
        let mut rows = 0;
        for line in lines {
            let line = line?;
            if line.is_empty() {
                continue;
            }
            let cells: Vec<&str> = line.split(',').collect();
            if cells.len() != names.len() {
                return Err(Error::Parse(format!("row {rows} has {} cells", cells.len())));
            }
            let mut coords = [0usize; AXES];
            for (c, cell) in coords.iter_mut().zip(&cells[..4]) {
                *c = cell
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad index `{cell}` in row {rows}")))?;
            }
            if grid.index(coords) != rows {
                return Err(Error::Parse(format!("row {rows} out of row-major order")));
            }
            for ((_, values), cell) in columns.iter_mut().zip(&cells[4..]) {
                values.push(
                    cell.parse()
                        .map_err(|_| Error::Parse(format!("bad value `{cell}` in row {rows}")))?,
                );
            }
            rows += 1;
        }
        if rows != grid.len() {
            return Err(Error::Parse(format!(
                "{rows} rows for a grid of {} points",
                grid.len()
            )));
        }
        Ok(Self { grid, columns })
    }
}

fn parse_grid_header(line: &str) -> Result<Grid4> {
    let body = line
        .strip_prefix('#')
        .ok_or_else(|| Error::Parse(format!("bad grid header `{line}`")))?;
    let mut dims = None;
    let mut h = None;
    let mut metric = Metric::Euclidean;
    for token in body.split_whitespace() {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("bad header token `{token}`")))?;
        match key {
            "dims" => {
                let parsed: Vec<usize> = value
                    .split(',')
                    .map(|v| v.parse().map_err(|_| Error::Parse(format!("bad dims `{value}`"))))
                    .collect::<Result<_>>()?;
                let arr: [usize; AXES] = parsed
                    .try_into()
                    .map_err(|_| Error::Parse(format!("dims must have 4 entries: `{value}`")))?;
                dims = Some(arr);
            }
            "h" => h = Some(value.parse().map_err(|_| Error::Parse(format!("bad h `{value}`")))?),
            "metric" => metric = value.parse()?,
            _ => {}
        }
    }
    match (dims, h) {
        (Some(d), Some(h)) => Ok(Grid4::new(d, h)?.with_metric(metric)),
        _ => Err(Error::Parse(format!("grid header missing dims or h: `{line}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn small() -> Grid4 {
        Grid4::cubic(8).unwrap()
    }

    #[test]
    fn rejects_tiny_or_bad_grids() {
        assert!(Grid4::new([3, 8, 8, 8], 0.1).is_err());
        assert!(Grid4::new([8; 4], 0.0).is_err());
        assert!(Grid4::new([8; 4], f64::NAN).is_err());
    }

    #[test]
    fn index_roundtrip_and_row_major() {
        let g = Grid4::new([4, 5, 6, 7], 0.5).unwrap();
        for idx in [0, 1, 7, 42, g.len() - 1] {
            assert_eq!(g.index(g.coords(idx)), idx);
        }
        assert_eq!(g.coords(1), [0, 0, 0, 1]);
        assert_eq!(g.coords(7), [0, 0, 1, 0]);
    }

    #[test]
    fn neighbours_wrap() {
        let g = small();
        let last = g.index([7, 0, 0, 0]);
        assert_eq!(g.neighbour(last, 0, true), 0);
        assert_eq!(g.neighbour(0, 0, false), last);
        assert_eq!(g.neighbour(0, 3, false), g.index([0, 0, 0, 7]));
    }

    #[test]
    fn partial_of_constant_is_zero() {
        let f = RealField::constant(small(), 3.5);
        for axis in 0..AXES {
            assert_eq!(partial(&f, axis).unwrap().max_norm(), 0.0);
        }
        assert_eq!(dalembertian(&f).max_norm(), 0.0);
        assert_eq!(laplacian_spatial(&f).max_norm(), 0.0);
    }

    #[test]
    fn axis_out_of_range() {
        let f = RealField::constant(small(), 1.0);
        assert!(matches!(partial(&f, 4), Err(Error::InvalidArgument(_))));
        assert!(second_difference(&f, 9).is_err());
    }

    #[test]
    fn partial_matches_discrete_symbol() {
        // central difference of sin(x) is sin(h)/h · cos(x)
        let g = Grid4::cubic(16).unwrap();
        let f = RealField::from_fn(g, |x| x[1].sin());
        let d = partial(&f, 1).unwrap();
        let s = g.h().sin() / g.h();
        let expect = RealField::from_fn(g, |x| s * x[1].cos());
        assert!(d.max_abs_diff(&expect).unwrap() < 1e-14);
        assert_eq!(partial(&f, 0).unwrap().max_norm(), 0.0);
    }

    #[test]
    fn partial_sin_converges_second_order() {
        let study = convergence_order(&[8, 16, 32], |g| {
            let f = RealField::from_fn(*g, |x| x[0].sin());
            let exact = RealField::from_fn(*g, |x| x[0].cos());
            partial(&f, 0)?.max_abs_diff(&exact)
        })
        .unwrap();
        let order = study.order().unwrap();
        assert!((order - 2.0).abs() < 0.2, "order {order}");
        // halving h shrinks the error by about four
        let ratio = study.errors[1] / study.errors[2];
        assert!((ratio - 4.0).abs() < 0.2, "ratio {ratio}");
    }

    #[test]
    fn partial_exact_on_locally_linear_interior() {
        let g = Grid4::cubic(16).unwrap();
        let f = RealField::from_fn(g, |x| 2.0 * x[2] - 1.0);
        let d = partial(&f, 2).unwrap();
        for idx in 0..g.len() {
            let c = g.coords(idx)[2];
            if c != 0 && c != 15 {
                assert!((d.at(idx) - 2.0).abs() < 1e-12);
            }
        }
        let study = convergence_order(&[8, 16, 32], |g| {
            let f = RealField::from_fn(*g, |x| 2.0 * x[2] - 1.0);
            let d = partial(&f, 2)?;
            let n = g.dims()[2];
            Ok((0..g.len())
                .filter(|&i| {
                    let c = g.coords(i)[2];
                    c != 0 && c != n - 1
                })
                .map(|i| (d.at(i) - 2.0).abs())
                .fold(0.0, f64::max))
        })
        .unwrap();
        assert_eq!(study.outcome, Convergence::Exact);
    }

    #[test]
    fn box_on_single_and_summed_modes() {
        for n in [8usize, 16, 32] {
            let g = Grid4::cubic(n).unwrap();
            let one = RealField::from_fn(g, |x| x[0].sin());
            let err1 = dalembertian(&one)
                .max_abs_diff(&one.map(|v| -v))
                .unwrap();
            assert!(err1 < g.h() * g.h() / 12.0 + 1e-12);
            let all = RealField::from_fn(g, |x| x.iter().map(|v| v.sin()).sum());
            let err4 = dalembertian(&all)
                .max_abs_diff(&all.map(|v| -v))
                .unwrap();
            assert!(err4 < 4.0 * g.h() * g.h() / 12.0 + 1e-12);
        }
        let study = convergence_order(&[8, 16, 32], |g| {
            let f = RealField::from_fn(*g, |x| x.iter().map(|v| v.sin()).sum());
            dalembertian(&f).max_abs_diff(&f.map(|v| -v))
        })
        .unwrap();
        assert!(study.within(2.0, 0.2), "{study:?}");
    }

    #[test]
    fn laplacian_ignores_time_axis() {
        let g = Grid4::cubic(16).unwrap();
        let t = RealField::from_fn(g, |x| x[3].sin());
        assert_eq!(laplacian_spatial(&t).max_norm(), 0.0);
        let y = RealField::from_fn(g, |x| x[1].sin());
        let err = laplacian_spatial(&y).max_abs_diff(&y.map(|v| -v)).unwrap();
        assert!(err < g.h() * g.h() / 12.0 + 1e-12);
    }

    #[test]
    fn lorentzian_box_flips_spatial_signs() {
        let g = Grid4::cubic(16).unwrap().with_metric(Metric::Lorentzian);
        let f = RealField::from_fn(g, |x| x[0].sin() + x[3].sin());
        let b = dalembertian(&f);
        let s = second_difference(&f, 3)
            .unwrap()
            .zip_map(&second_difference(&f, 0).unwrap(), |t, x| t - x)
            .unwrap();
        assert!(b.max_abs_diff(&s).unwrap() < 1e-13);
    }

    #[test]
    fn divergence_of_gradient_close_to_box() {
        let study = convergence_order(&[8, 16, 32], |g| {
            let phi = RealField::from_fn(*g, |x| (x[0] + x[1]).sin() * x[2].cos() + x[3].sin());
            let grad: VectorField<f64> = [
                partial(&phi, 0)?,
                partial(&phi, 1)?,
                partial(&phi, 2)?,
                partial(&phi, 3)?,
            ];
            divergence(&grad)?.max_abs_diff(&dalembertian(&phi))
        })
        .unwrap();
        // the composed stencil differs from the three-point second difference at O(h²), not zero
        assert!(study.errors[0] > 1e-3);
        assert!(study.within(2.0, 0.2), "{study:?}");
    }

    #[test]
    fn divergence_of_stream_function_field() {
        // V1 = ∂2ψ, V2 = −∂1ψ: discrete divergence cancels exactly
        let g = Grid4::cubic(16).unwrap();
        let psi = RealField::from_fn(g, |x| (x[0] - 2.0 * x[1]).sin() + x[1].cos());
        let v = [
            partial(&psi, 1).unwrap(),
            partial(&psi, 0).unwrap().map(|v| -v),
            RealField::constant(g, 0.0),
            RealField::constant(g, 0.0),
        ];
        assert!(divergence(&v).unwrap().max_norm() < 1e-13);
        let c = [0.5, -1.0, 2.0, 3.0].map(|k| RealField::constant(g, k));
        assert_eq!(divergence(&c).unwrap().max_norm(), 0.0);
    }

    #[test]
    fn divergence_mixed_grids_rejected() {
        let a = RealField::constant(small(), 0.0);
        let b = RealField::constant(Grid4::cubic(10).unwrap(), 0.0);
        let v = [a.clone(), b, a.clone(), a];
        assert!(matches!(divergence(&v), Err(Error::Dimension(_))));
    }

    #[test]
    fn convergence_needs_three_resolutions() {
        assert!(convergence_order(&[8, 16], |_| Ok(1.0)).is_err());
    }

    #[test]
    fn table_roundtrip() {
        let g = Grid4::new([4, 4, 5, 4], PI / 2.0).unwrap().with_metric(Metric::Lorentzian);
        let r = RealField::from_fn(g, |x| x[2] - 0.1 * x[0]);
        let c = ComplexField::from_fn(g, |x| Complex64::new(x[1].cos(), x[3].sin() / 3.0));
        let mut t = FieldTable::new(g);
        t.push_real("lam", &r).unwrap();
        t.push_complex("f", &c).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let back = FieldTable::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.column("f_im").unwrap().len(), g.len());
    }

    #[test]
    fn table_rejects_truncated_input() {
        let g = small();
        let mut t = FieldTable::new(g);
        t.push_real("a", &RealField::constant(g, 1.0)).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        buf.truncate(buf.len() / 2);
        let cut = buf.iter().rposition(|&b| b == b'\n').unwrap();
        buf.truncate(cut + 1);
        assert!(FieldTable::read_csv(buf.as_slice()).is_err());
    }
}
