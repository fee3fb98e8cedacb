//! Trivialization data for the collapsed bundle: open-ball charts, canonical
//! sections, transition functions and the reduced spin-½ operator.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::contraction::{
    contraction_validity, distance, norm, sample_unit_ball, Certificate, ContractionMap, Vec4,
};
use crate::error::{Error, Result};
use crate::su2::{pauli, Coupling, Matrix2c};

/// Open ball B_{1/n}(x*) with the contraction map sharing its center.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Chart {
    map: ContractionMap,
}

pub fn make_chart(center: Vec4, n: u64) -> Result<Chart> {
    Ok(Chart {
        map: ContractionMap::new(center, n)?,
    })
}

impl Chart {
    pub fn center(&self) -> Vec4 {
        self.map.center()
    }

    pub fn n(&self) -> u64 {
        self.map.n()
    }

    pub fn radius(&self) -> f64 {
        self.map.radius()
    }

    pub fn contraction(&self) -> &ContractionMap {
        &self.map
    }

    /// Strict membership d(x*, x) < 1/n.
    pub fn contains(&self, x: &Vec4) -> bool {
        distance(&self.center(), x) < self.radius()
    }

    /// Certified bound |x*|/n² on sup |λ(x) − x*| over the chart.
    pub fn image_bound(&self) -> f64 {
        let n = self.n() as f64;
        norm(&self.center()) / (n * n)
    }

    /// `count` seeded points inside the chart. The unit-ball draws depend only
    /// on the seed, so charts of different n see the same scaled pattern.
    pub fn sample(&self, count: usize, seed: u64) -> Vec<Vec4> {
        let c = self.center();
        let r = self.radius();
        sample_unit_ball(seed, count)
            .into_iter()
            .map(|u| [0, 1, 2, 3].map(|i| c[i] + r * u[i]))
            .filter(|x| self.contains(x))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImageDiameter {
    /// max pairwise distance between sampled images λ(x).
    pub diameter: f64,
    /// max sampled |λ(x) − x*|.
    pub max_deviation: f64,
    /// 2|x*|/n².
    pub bound: f64,
    pub samples: usize,
}

/// Seeded estimate of diam λ(B_{1/n}(x*)).
pub fn chart_image_diameter(chart: &Chart, samples: usize, seed: u64) -> Result<ImageDiameter> {
    if samples < 2 {
        return Err(Error::invalid("need at least two samples"));
    }
    let pts = chart.sample(samples, seed);
    let images: Vec<Vec4> = pts
        .iter()
        .map(|x| chart.contraction().eval(*x))
        .collect::<Result<_>>()?;
    let mut diameter = 0.0_f64;
    for (i, a) in images.iter().enumerate() {
        for b in &images[i + 1..] {
            diameter = diameter.max(distance(a, b));
        }
    }
    let c = chart.center();
    let max_deviation = images
        .iter()
        .map(|y| distance(y, &c))
        .fold(0.0, f64::max);
    Ok(ImageDiameter {
        diameter,
        max_deviation,
        bound: 2.0 * chart.image_bound(),
        samples: images.len(),
    })
}

/// Smallest n with |x*|/n² < tol.
pub fn collapse_threshold(center: &Vec4, tol: f64) -> Result<u64> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::invalid("collapse tolerance must be positive"));
    }
    let c = norm(center);
    if c == 0.0 {
        return Ok(1);
    }
    let mut n = (c / tol).sqrt().floor().max(1.0) as u64;
    while c / ((n * n) as f64) >= tol {
        n += 1;
    }
    while n > 1 && c / (((n - 1) * (n - 1)) as f64) < tol {
        n -= 1;
    }
    Ok(n)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CollapseStep {
    pub n: u64,
    pub diameter: f64,
    pub bound: f64,
    pub collapsed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CollapseReport {
    pub center: Vec4,
    pub tolerance: f64,
    pub steps: Vec<CollapseStep>,
    /// First n of the schedule at which the chart counts as collapsed.
    pub collapsed_at: Option<u64>,
    pub monotone: bool,
}

impl CollapseReport {
    pub fn collapsed(&self) -> bool {
        self.collapsed_at.is_some()
    }
}

/// Shrinks the chart along an increasing n schedule. Collapse is declared
/// when the certified image bound |x*|/n² drops below `tol`; the sampled
/// diameter is recorded alongside.
pub fn collapse_chart(
    center: Vec4,
    schedule: &[u64],
    tol: f64,
    samples: usize,
    seed: u64,
) -> Result<CollapseReport> {
    if schedule.is_empty() {
        return Err(Error::invalid("empty n schedule"));
    }
    if schedule.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("n schedule must be strictly increasing"));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::invalid("collapse tolerance must be positive"));
    }
    let mut steps = Vec::with_capacity(schedule.len());
    for &n in schedule {
        let chart = make_chart(center, n)?;
        let d = chart_image_diameter(&chart, samples, seed)?;
        steps.push(CollapseStep {
            n,
            diameter: d.diameter,
            bound: chart.image_bound(),
            collapsed: chart.image_bound() < tol,
        });
    }
    let collapsed_at = steps.iter().find(|s| s.collapsed).map(|s| s.n);
    let monotone = steps.windows(2).all(|w| w[1].diameter <= w[0].diameter);
    Ok(CollapseReport {
        center,
        tolerance: tol,
        steps,
        collapsed_at,
        monotone,
    })
}

/// Canonical section s(x) = (x, e), over the chart or, once collapsed, over {x*}.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Section {
    pub chart: Chart,
    pub collapsed: bool,
    /// Sampled base points of the domain.
    pub points: Vec<Vec4>,
}

pub fn canonical_section(chart: &Chart, collapsed: bool, samples: usize, seed: u64) -> Section {
    let points = if collapsed {
        vec![chart.center()]
    } else {
        chart.sample(samples, seed)
    };
    Section {
        chart: *chart,
        collapsed,
        points,
    }
}

impl Section {
    pub fn in_domain(&self, x: &Vec4) -> bool {
        if self.collapsed {
            *x == self.chart.center()
        } else {
            self.chart.contains(x)
        }
    }

    /// The group value, always the identity; undefined outside the domain.
    pub fn value(&self, x: &Vec4) -> Result<Matrix2c> {
        if self.in_domain(x) {
            Ok(Matrix2c::IDENTITY)
        } else {
            Err(Error::Domain(format!("{x:?} outside the section domain")))
        }
    }

    /// π(s(x)).
    pub fn project(&self, x: &Vec4) -> Result<Vec4> {
        self.value(x).map(|_| *x)
    }

    /// Projection and identity checks over every sampled base point.
    pub fn verify(&self) -> bool {
        self.points.iter().all(|x| {
            self.project(x).ok() == Some(*x) && self.value(x).ok() == Some(Matrix2c::IDENTITY)
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atlas {
    pub charts: Vec<Chart>,
    pub collapsed: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Consistency {
    Consistent,
    Inconsistent,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OverlapCheck {
    pub i: usize,
    pub j: usize,
    pub overlapping: bool,
    pub sampled_points: usize,
    /// max ‖s_j − s_i t_ij‖ and max ‖t_ij t_ji − 1‖ over sampled overlap points.
    pub max_defect: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub status: Consistency,
    pub pairs: Vec<OverlapCheck>,
    pub reason: Option<String>,
}

/// Transition function between canonical sections: the identity on overlaps.
pub fn transition(_i: &Chart, _j: &Chart, _x: &Vec4) -> Matrix2c {
    Matrix2c::IDENTITY
}

const OVERLAP_SAMPLES: usize = 256;

pub fn transition_consistency(atlas: &Atlas, seed: u64) -> Result<ConsistencyReport> {
    if atlas.charts.is_empty() {
        return Err(Error::invalid("atlas has no charts"));
    }
    let sections: Vec<Section> = atlas
        .charts
        .iter()
        .map(|c| canonical_section(c, atlas.collapsed, OVERLAP_SAMPLES, seed))
        .collect();
    let mut pairs = Vec::new();
    let mut reason = None;
    for i in 0..atlas.charts.len() {
        for j in i..atlas.charts.len() {
            let (a, b) = (&atlas.charts[i], &atlas.charts[j]);
            if atlas.collapsed {
                let same = a.center() == b.center();
                if !same && reason.is_none() {
                    reason = Some(format!(
                        "charts {i} and {j} collapse onto distinct points {:?} and {:?}; \
                         constant sections on distinct singletons admit no transition \
                         function, so the contraction point must be unique",
                        a.center(),
                        b.center()
                    ));
                }
                pairs.push(OverlapCheck {
                    i,
                    j,
                    overlapping: same,
                    sampled_points: usize::from(same),
                    max_defect: 0.0,
                });
                continue;
            }
            let overlapping =
                distance(&a.center(), &b.center()) < a.radius() + b.radius();
            let mut pts: Vec<Vec4> = sections[i].points.clone();
            pts.extend_from_slice(&sections[j].points);
            pts.retain(|x| a.contains(x) && b.contains(x));
            let mut max_defect = 0.0_f64;
            for x in &pts {
                let t_ij = transition(a, b, x);
                let t_ji = transition(b, a, x);
                let si = sections[i].value(x)?;
                let sj = sections[j].value(x)?;
                max_defect = max_defect
                    .max((sj - si * t_ij).max_entry())
                    .max((t_ij * t_ji - Matrix2c::IDENTITY).max_entry());
            }
            if max_defect > 0.0 && reason.is_none() {
                reason = Some(format!("transition defect {max_defect:e} on charts {i},{j}"));
            }
            pairs.push(OverlapCheck {
                i,
                j,
                overlapping,
                sampled_points: pts.len(),
                max_defect,
            });
        }
    }
    Ok(ConsistencyReport {
        status: if reason.is_none() {
            Consistency::Consistent
        } else {
            Consistency::Inconsistent
        },
        pairs,
        reason,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConnectionCoefficients {
    /// c_μ = −i g e^{−iλ_μ(x)}.
    pub coefficients: [Complex64; 4],
    /// On a singleton domain dx_μ = 0, so the connection one-form vanishes
    /// even though the coefficients do not.
    pub one_form_vanishes: bool,
}

pub fn connection_coefficients(
    section: &Section,
    x: &Vec4,
    lambda: [f64; 4],
    g: Coupling,
) -> Result<ConnectionCoefficients> {
    if !section.in_domain(x) {
        return Err(Error::Domain(format!("{x:?} outside the chart")));
    }
    if lambda.iter().any(|l| !l.is_finite()) {
        return Err(Error::invalid("non-finite λ"));
    }
    Ok(ConnectionCoefficients {
        coefficients: lambda.map(|l| Complex64::new(0.0, -g.value()) * Complex64::from_polar(1.0, -l)),
        one_form_vanishes: section.collapsed,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReducedOperator {
    pub coupling: f64,
    pub pauli_index: usize,
    pub coefficients: [Complex64; 4],
    /// A^a_μ = c_μ σ^a.
    pub matrices: [Matrix2c; 4],
    /// σ^a / 2.
    pub observable: Matrix2c,
    pub spectrum: [f64; 2],
}

impl ReducedOperator {
    /// max_μ ||c_μ| − g|.
    pub fn modulus_defect(&self) -> f64 {
        self.coefficients
            .iter()
            .map(|c| (c.norm() - self.coupling).abs())
            .fold(0.0, f64::max)
    }

    /// max deviation of the observable spectrum from {−½, ½}.
    pub fn spectrum_defect(&self) -> f64 {
        (self.spectrum[0] + 0.5).abs().max((self.spectrum[1] - 0.5).abs())
    }
}

/// A^a_μ = −i g e^{−i x*_μ} σ^a, one matrix per μ.
pub fn reduced_operator(center: Vec4, g: Coupling, a: usize) -> Result<ReducedOperator> {
    let s = pauli(a)?;
    let coefficients =
        center.map(|x| Complex64::new(0.0, -g.value()) * Complex64::from_polar(1.0, -x));
    let observable = s * 0.5;
    Ok(ReducedOperator {
        coupling: g.value(),
        pauli_index: a,
        coefficients,
        matrices: coefficients.map(|c| s * c),
        observable,
        spectrum: observable.hermitian_eigenvalues(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub centers: Vec<Vec4>,
    pub schedule: Vec<u64>,
    pub tolerance: f64,
    pub coupling: Coupling,
    pub pauli_index: usize,
    pub samples: usize,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum StageStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stage {
    pub name: String,
    pub status: StageStatus,
    pub notes: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionStatus {
    Reduced,
    NotCollapsed,
    Inconsistent,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionReport {
    pub status: ReductionStatus,
    pub stages: Vec<Stage>,
    pub collapse: Vec<CollapseReport>,
    pub certificates: Vec<Certificate>,
    pub consistency: Option<ConsistencyReport>,
    pub connection: Option<ConnectionCoefficients>,
    pub operator: Option<ReducedOperator>,
    pub errata: Vec<String>,
}

pub fn pipeline_errata() -> Vec<String> {
    vec![
        "per-chart contraction printed with a positive exponent e^{+|x*′−x|/n}; \
         implemented with the negative sign, since the positive one expands"
            .to_string(),
        "sections said to vanish outside their singleton; SU(2) has no zero \
         element, so they are left undefined there"
            .to_string(),
    ]
}

/// collapse → constant sections → transitions → connection → reduced operator.
pub fn reduction_pipeline(cfg: &PipelineConfig) -> Result<ReductionReport> {
    if cfg.centers.is_empty() {
        return Err(Error::invalid("pipeline needs at least one center"));
    }
    pauli(cfg.pauli_index)?;
    let mut stages = Vec::new();
    let mut collapse = Vec::with_capacity(cfg.centers.len());
    for c in &cfg.centers {
        collapse.push(collapse_chart(*c, &cfg.schedule, cfg.tolerance, cfg.samples, cfg.seed)?);
    }
    let n_final = *cfg.schedule.last().expect("non-empty schedule");
    let charts: Vec<Chart> = cfg
        .centers
        .iter()
        .map(|c| make_chart(*c, n_final))
        .collect::<Result<_>>()?;
    let certificates: Vec<Certificate> = charts
        .iter()
        .map(|c| contraction_validity(c.contraction()))
        .collect();
    let all_collapsed = collapse.iter().all(CollapseReport::collapsed);
    let worst_bound = collapse
        .iter()
        .filter_map(|r| r.steps.last())
        .map(|s| s.bound)
        .fold(0.0, f64::max);
    stages.push(Stage {
        name: "collapse".into(),
        status: if all_collapsed { StageStatus::Pass } else { StageStatus::Fail },
        notes: if all_collapsed {
            format!("collapsed by n = {n_final}")
        } else {
            format!(
                "not collapsed: image bound {worst_bound:e} at n = {n_final} is not below {:e}",
                cfg.tolerance
            )
        },
    });
    let mut report = ReductionReport {
        status: ReductionStatus::NotCollapsed,
        stages,
        collapse,
        certificates,
        consistency: None,
        connection: None,
        operator: None,
        errata: pipeline_errata(),
    };
    if !all_collapsed {
        for name in ["section", "transition", "connection", "operator"] {
            report.stages.push(Stage {
                name: name.into(),
                status: StageStatus::Skipped,
                notes: "chart not collapsed".into(),
            });
        }
        return Ok(report);
    }

    let sections: Vec<Section> = charts
        .iter()
        .map(|c| canonical_section(c, true, cfg.samples, cfg.seed))
        .collect();
    let sections_ok = sections.iter().all(|s| s.points.len() == 1 && s.verify());
    report.stages.push(Stage {
        name: "section".into(),
        status: if sections_ok { StageStatus::Pass } else { StageStatus::Fail },
        notes: "constant identity section on {x*}".into(),
    });

    let consistency = transition_consistency(
        &Atlas {
            charts: charts.clone(),
            collapsed: true,
        },
        cfg.seed,
    )?;
    let consistent = consistency.status == Consistency::Consistent;
    report.stages.push(Stage {
        name: "transition".into(),
        status: if consistent { StageStatus::Pass } else { StageStatus::Fail },
        notes: consistency
            .reason
            .clone()
            .unwrap_or_else(|| "t_ii = 1 at the unique contraction point".into()),
    });
    report.consistency = Some(consistency);
    if !consistent {
        report.status = ReductionStatus::Inconsistent;
        for name in ["connection", "operator"] {
            report.stages.push(Stage {
                name: name.into(),
                status: StageStatus::Skipped,
                notes: "halted at transition".into(),
            });
        }
        return Ok(report);
    }

    let center = cfg.centers[0];
    let connection = connection_coefficients(&sections[0], &center, center, cfg.coupling)?;
    report.stages.push(Stage {
        name: "connection".into(),
        status: if connection.one_form_vanishes { StageStatus::Pass } else { StageStatus::Fail },
        notes: "pullback coefficients −i g e^{−i x*_μ}; one-form vanishes on the singleton".into(),
    });
    report.connection = Some(connection);

    let op = reduced_operator(center, cfg.coupling, cfg.pauli_index)?;
    let ok = op.modulus_defect() <= 1e-15 && op.spectrum_defect() <= 1e-12;
    report.stages.push(Stage {
        name: "operator".into(),
        status: if ok { StageStatus::Pass } else { StageStatus::Fail },
        notes: format!(
            "global U(1) phase times σ{}; spectrum of σ{}/2 = {:?}",
            cfg.pauli_index, cfg.pauli_index, op.spectrum
        ),
    });
    report.operator = Some(op);
    report.status = ReductionStatus::Reduced;
    Ok(report)
}
