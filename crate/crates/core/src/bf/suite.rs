//! The named checks behind `gerbekit check`.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::report::{loglog_slope, CheckReport, Measure, Row};
use super::{bf_action, bf_action_bruteforce};
use crate::bundle::{log_curvature, BundleData};
use crate::cochain::{alternate_4cell, bianchi_residual_linear, cocycle_terms};
use crate::error::{Error, Result};
use crate::gerbe::{gauge_transform_linear, sweep_backtrack, GerbeData, SectionData};
use crate::io::{resolve_complex, FieldFile};
use crate::liegroup::{random_group, AlgebraElement, Group, GroupElement};
use crate::pathspace::EdgePath;
use crate::sample::{amplitude_gauge, amplitude_linear_gerbe, smooth_bundle, smooth_linear_gerbe};
use crate::simplicial::{orderings, SimplicialComplex};

/// Check names in dependency order.
pub const CHECK_NAMES: [&str; 9] = [
    "bianchi-exact",
    "bianchi-linear",
    "naturality",
    "fake-curvature",
    "omega-cross",
    "cocycle",
    "gauge",
    "zigzag",
    "bf",
];

/// Expected convergence orders, pinned from the scaling oracles.
pub mod expected {
    pub const BIANCHI_LINEAR: f64 = 4.0;
    pub const FAKE_CURVATURE: f64 = 3.0;
    pub const OMEGA_CROSS: f64 = 4.0;
    pub const COCYCLE: f64 = 5.0;
    pub const COCYCLE_GROUP: f64 = 5.0;
    pub const GAUGE: f64 = 2.0;
    pub const BF: f64 = 2.0;
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub group: Group,
    /// First seed; samples use seed, seed+1, ….
    pub seed: u64,
    /// Number of seeds; each check has its own default.
    pub seeds: Option<usize>,
    pub eps: Option<Vec<f64>>,
    pub delta: Option<Vec<f64>>,
    pub tol_exact: f64,
    pub slope_margin: f64,
    /// Builtin name or complex file; each check has its own default.
    pub complex: Option<String>,
    /// Field data for exact-mode checks.
    pub fields: Option<FieldFile>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            group: Group::Su2,
            seed: 0,
            seeds: None,
            eps: None,
            delta: None,
            tol_exact: 1e-10,
            slope_margin: 0.2,
            complex: None,
            fields: None,
        }
    }
}

pub const DEFAULT_EPS: [f64; 4] = [1e-1, 0.031_622_776_601_683_79, 1e-2, 0.003_162_277_660_168_379];
pub const DEFAULT_DELTA: [f64; 3] = [1e-1, 1e-2, 1e-3];

fn check_scales(name: &str, xs: &[f64]) -> Result<()> {
    if xs.len() < 3 {
        return Err(Error::Invalid(format!("--{name} needs at least 3 values for a slope fit")));
    }
    if xs.iter().any(|x| x.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater)) || xs.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::Invalid(format!("--{name} values must be positive and strictly descending")));
    }
    Ok(())
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if let Some(e) = &self.eps {
            check_scales("eps", e)?;
        }
        if let Some(d) = &self.delta {
            check_scales("delta", d)?;
        }
        if self.tol_exact.is_nan() || self.tol_exact <= 0.0 || self.slope_margin.is_nan() || self.slope_margin < 0.0 {
            return Err(Error::Invalid("tolerances must be positive".into()));
        }
        Ok(())
    }

    fn seed_list(&self, default: usize) -> Vec<u64> {
        (0..self.seeds.unwrap_or(default) as u64).map(|i| self.seed + i).collect()
    }

    fn eps_list(&self) -> Vec<f64> {
        self.eps.clone().unwrap_or_else(|| DEFAULT_EPS.to_vec())
    }

    fn delta_list(&self) -> Vec<f64> {
        self.delta.clone().unwrap_or_else(|| DEFAULT_DELTA.to_vec())
    }

    /// The first --eps value, or `default` for checks run at a fixed ε.
    fn fixed_eps(&self, default: f64) -> f64 {
        self.eps.as_ref().and_then(|e| e.first().copied()).unwrap_or(default)
    }

    fn complex_or(&self, default: &str) -> Result<SimplicialComplex> {
        resolve_complex(self.complex.as_deref().unwrap_or(default))
    }
}

/// Independent stream per (seed, check) pair.
fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Runs one named check, or all of them for "all".
pub fn run_check(name: &str, cfg: &RunConfig) -> Result<CheckReport> {
    cfg.validate()?;
    if name == "all" {
        let mut out = CheckReport { name: "all".into(), ..Default::default() };
        for n in CHECK_NAMES {
            out.merge(run_check(n, cfg)?);
        }
        return Ok(out);
    }
    if let Some(fields) = &cfg.fields {
        return exact_mode(name, cfg, fields);
    }
    let mut report = match name {
        "bianchi-exact" => bianchi_exact(cfg)?,
        "bianchi-linear" => bianchi_linear(cfg)?,
        "naturality" => naturality(cfg)?,
        "fake-curvature" => fake_curvature(cfg)?,
        "omega-cross" => omega_cross(cfg)?,
        "cocycle" => cocycle(cfg)?,
        "gauge" => gauge(cfg)?,
        "zigzag" => zigzag(cfg)?,
        "bf" => bf(cfg)?,
        _ => return Err(Error::Unknown { kind: "check", name: name.to_string() }),
    };
    report.name = name.to_string();
    Ok(report)
}

/// Samples at one scale: (seed, reference size, residual).
type Samples = Vec<(u64, f64, f64)>;

struct Scaling<'a> {
    measure: &'a str,
    group: Group,
    /// true when the scale is δ rather than ε
    is_delta: bool,
    fixed_other: Option<f64>,
    expected: f64,
    margin: f64,
}

impl Scaling<'_> {
    fn rows_and_measure(&self, scales: &[f64], samples: &[Samples]) -> (Vec<Row>, Measure, f64) {
        let mut rows = Vec::new();
        let mut means = Vec::new();
        for (scale, at) in scales.iter().zip(samples) {
            for &(seed, s, r) in at {
                rows.push(self.row(Some(*scale), Some(seed), Some(s), r, None));
            }
            means.push(at.iter().map(|x| x.2).sum::<f64>() / at.len().max(1) as f64);
        }
        let slope = loglog_slope(scales, &means);
        let max_residual = samples.iter().flatten().map(|x| x.2).fold(0.0, f64::max);
        rows.push(self.row(None, None, None, max_residual, Some(slope)));
        let measure = Measure {
            check: self.measure.to_string(),
            pass: slope.is_finite() && slope >= self.expected - self.margin,
            slope: Some(slope),
            expected: self.expected,
            max_residual,
        };
        (rows, measure, slope)
    }

    fn row(&self, scale: Option<f64>, seed: Option<u64>, s: Option<f64>, r: f64, slope: Option<f64>) -> Row {
        let (epsilon, delta) = if self.is_delta { (self.fixed_other, scale) } else { (scale, self.fixed_other) };
        Row {
            check: self.measure.to_string(),
            group: self.group.name().to_string(),
            epsilon,
            delta,
            seed,
            s,
            delta_s: r,
            slope,
        }
    }
}

fn exact_measure(name: &str, group: Group, samples: &[(u64, f64)], tol: f64) -> (Vec<Row>, Measure) {
    let mut rows: Vec<Row> = samples
        .iter()
        .map(|&(seed, r)| Row {
            check: name.to_string(),
            group: group.name().to_string(),
            epsilon: None,
            delta: None,
            seed: Some(seed),
            s: None,
            delta_s: r,
            slope: None,
        })
        .collect();
    let max_residual = samples.iter().map(|x| x.1).fold(0.0, f64::max);
    rows.push(Row {
        check: name.to_string(),
        group: group.name().to_string(),
        epsilon: None,
        delta: None,
        seed: None,
        s: None,
        delta_s: max_residual,
        slope: None,
    });
    let measure = Measure { check: name.to_string(), pass: max_residual <= tol, slope: None, expected: 0.0, max_residual };
    (rows, measure)
}

fn add_exact(report: &mut CheckReport, name: &str, group: Group, samples: &[(u64, f64)], tol: f64) {
    let (rows, m) = exact_measure(name, group, samples, tol);
    report.rows.extend(rows);
    report.measures.push(m);
}

fn add_scaling(report: &mut CheckReport, sc: &Scaling, scales: &[f64], samples: &[Samples]) -> f64 {
    let (rows, m, slope) = sc.rows_and_measure(scales, samples);
    report.rows.extend(rows);
    report.measures.push(m);
    slope
}

/// Per-seed closure evaluated at every scale, seeds in parallel, output by scale.
fn sweep<T: Send>(
    seeds: &[u64],
    scales: &[f64],
    f: impl Fn(u64, f64) -> Result<T> + Sync,
) -> Result<Vec<Vec<(u64, T)>>> {
    let per_seed: Vec<Vec<T>> = seeds
        .par_iter()
        .map(|&s| scales.iter().map(|&x| f(s, x)).collect::<Result<Vec<T>>>())
        .collect::<Result<Vec<_>>>()?;
    let mut by_scale: Vec<Vec<(u64, T)>> = scales.iter().map(|_| Vec::new()).collect();
    for (seed, values) in seeds.iter().zip(per_seed) {
        for (slot, v) in by_scale.iter_mut().zip(values) {
            slot.push((*seed, v));
        }
    }
    Ok(by_scale)
}

fn tetra_cells(c: &SimplicialComplex) -> Vec<[usize; 4]> {
    c.cells(3).into_iter().map(|v| [v[0], v[1], v[2], v[3]]).collect()
}

fn four_cells(c: &SimplicialComplex) -> Vec<[usize; 5]> {
    c.cells(4).into_iter().map(|v| [v[0], v[1], v[2], v[3], v[4]]).collect()
}

fn bianchi_exact_on(bundle: &BundleData, complex: &SimplicialComplex) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for t in tetra_cells(complex) {
        for o in orderings(&t) {
            worst = worst.max(bundle.mult_bianchi_defect([o[0], o[1], o[2], o[3]])?);
        }
    }
    Ok(worst)
}

fn bianchi_exact(cfg: &RunConfig) -> Result<CheckReport> {
    let names: Vec<String> = match &cfg.complex {
        Some(c) => vec![c.clone()],
        None => vec!["delta3".into(), "delta4".into()],
    };
    let mut report = CheckReport::default();
    for name in names {
        let complex = resolve_complex(&name)?;
        let seeds = cfg.seed_list(100);
        let samples: Vec<(u64, f64)> = seeds
            .par_iter()
            .map(|&s| {
                let mut rng = rng_for(s, 1);
                let b = BundleData::random(&complex, cfg.group, &mut rng);
                Ok((s, bianchi_exact_on(&b, &complex)?))
            })
            .collect::<Result<_>>()?;
        add_exact(&mut report, "bianchi-exact", cfg.group, &samples, cfg.tol_exact);
    }
    merge_measures(&mut report, "bianchi-exact");
    Ok(report)
}

/// Collapses repeated measures of the same name into one (worst case).
fn merge_measures(report: &mut CheckReport, name: &str) {
    let same: Vec<Measure> = report.measures.iter().filter(|m| m.check == name).cloned().collect();
    if same.len() > 1 {
        report.measures.retain(|m| m.check != name);
        report.measures.push(Measure {
            check: name.to_string(),
            pass: same.iter().all(|m| m.pass),
            slope: None,
            expected: 0.0,
            max_residual: same.iter().map(|m| m.max_residual).fold(0.0, f64::max),
        });
    }
}

fn bianchi_linear(cfg: &RunConfig) -> Result<CheckReport> {
    let complex = cfg.complex_or("delta3")?;
    let scales = cfg.eps_list();
    let samples = sweep(&cfg.seed_list(20), &scales, |s, eps| {
        let mut rng = rng_for(s, 2);
        let (bundle, _) = smooth_bundle(&complex, cfg.group, eps, &mut rng)?;
        let a = bundle.linearize()?;
        let f = log_curvature(&bundle, &complex)?;
        let size: f64 = f.iter().map(|(_, v)| v.norm()).sum();
        let mut res = 0.0;
        for [w, x, y, z] in tetra_cells(&complex) {
            res += bianchi_residual_linear(&a, &f, [w, x, y, z])?.norm();
            res += bianchi_residual_linear(&a, &f, [w, x, z, y])?.norm();
        }
        Ok((size, res))
    })?;
    let samples: Vec<Samples> = samples.into_iter().map(|v| v.into_iter().map(|(s, (a, b))| (s, a, b)).collect()).collect();
    let mut report = CheckReport::default();
    let sc = Scaling {
        measure: "bianchi-linear",
        group: cfg.group,
        is_delta: false,
        fixed_other: None,
        expected: expected::BIANCHI_LINEAR,
        margin: cfg.slope_margin,
    };
    add_scaling(&mut report, &sc, &scales, &samples);
    Ok(report)
}

fn random_induced(complex: &SimplicialComplex, group: Group, rng: &mut ChaCha8Rng) -> Result<GerbeData> {
    GerbeData::bundle_induced(&BundleData::random(complex, group, rng), complex)
}

/// Worst naturality and β-inverse defect over all triangle orderings, `n_u` samples each.
pub fn naturality_on<R: Rng>(g: &GerbeData, n_u: usize, rng: &mut R) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for t in g.triangles() {
        for o in orderings(&t) {
            let tri = [o[0], o[1], o[2]];
            worst = worst.max(g.beta_inverse_defect(tri[0], tri[1], tri[2])?);
            for _ in 0..n_u {
                let u = random_group(rng, g.group());
                worst = worst.max(g.naturality_defect(tri, &u)?);
            }
        }
    }
    Ok(worst)
}

fn naturality(cfg: &RunConfig) -> Result<CheckReport> {
    let complex = cfg.complex_or("delta4")?;
    let samples: Vec<(u64, f64)> = cfg
        .seed_list(50)
        .par_iter()
        .map(|&s| {
            let mut rng = rng_for(s, 3);
            let g = random_induced(&complex, cfg.group, &mut rng)?;
            Ok((s, naturality_on(&g, 100, &mut rng)?))
        })
        .collect::<Result<_>>()?;
    let mut report = CheckReport::default();
    add_exact(&mut report, "naturality", cfg.group, &samples, cfg.tol_exact);
    Ok(report)
}

fn fake_curvature(cfg: &RunConfig) -> Result<CheckReport> {
    let complex = cfg.complex_or("delta4")?;
    let scales = cfg.eps_list();
    let samples = sweep(&cfg.seed_list(20), &scales, |s, eps| {
        let mut rng = rng_for(s, 4);
        let (bundle, _) = smooth_bundle(&complex, cfg.group, eps, &mut rng)?;
        let g = GerbeData::bundle_induced(&bundle, &complex)?;
        let lin = g.linearize()?;
        let (mut size, mut res) = (0.0, 0.0);
        for t in g.triangles() {
            for o in orderings(&t) {
                let tri = [o[0], o[1], o[2]];
                res += g.beta_expansion_defect(&lin, tri)?;
                size += lin.nu(tri)?.norm();
            }
        }
        Ok((s, size, res))
    })?;
    let samples: Vec<Samples> = samples.into_iter().map(|v| v.into_iter().map(|(_, x)| x).collect()).collect();
    let mut report = CheckReport::default();
    let sc = Scaling {
        measure: "fake-curvature",
        group: cfg.group,
        is_delta: false,
        fixed_other: None,
        expected: expected::FAKE_CURVATURE,
        margin: cfg.slope_margin,
    };
    add_scaling(&mut report, &sc, &scales, &samples);
    Ok(report)
}

/// Sweeps ⟨v w x y v⟩ over every ordering of every tetrahedron.
fn all_sweeps(complex: &SimplicialComplex) -> Vec<[usize; 4]> {
    tetra_cells(complex)
        .into_iter()
        .flat_map(|t| orderings(&t))
        .map(|o| [o[0], o[1], o[2], o[3]])
        .collect()
}

/// Σ ‖log Ω − ω‖ and Σ ‖ω‖ over all sweeps; `transport` selects the word-transport Ω.
pub fn omega_cross_on(g: &GerbeData, complex: &SimplicialComplex, transport: bool) -> Result<(f64, f64)> {
    let lin = g.linearize()?;
    let (mut size, mut res) = (0.0, 0.0);
    for sweep in all_sweeps(complex) {
        let om = if transport { g.omega_transport(sweep)? } else { g.omega_group(sweep)? };
        let w = lin.omega(sweep)?;
        res += (om.log()? - w).norm();
        size += w.norm();
    }
    Ok((size, res))
}

fn omega_cross(cfg: &RunConfig) -> Result<CheckReport> {
    let complex = cfg.complex_or("delta4")?;
    let scales = cfg.eps_list();
    let seeds = cfg.seed_list(20);
    let samples = sweep(&seeds, &scales, |s, eps| {
        let mut rng = rng_for(s, 5);
        let lin = smooth_linear_gerbe(&complex, eps, &mut rng);
        let g = GerbeData::from_linear(cfg.group, &lin)?;
        let (size, res) = omega_cross_on(&g, &complex, false)?;
        let (_, res_t) = omega_cross_on(&g, &complex, true)?;
        Ok(((s, size, res), (s, size, res_t)))
    })?;
    let quoted: Vec<Samples> = samples.iter().map(|v| v.iter().map(|(_, x)| x.0).collect()).collect();
    let transport: Vec<Samples> = samples.iter().map(|v| v.iter().map(|(_, x)| x.1).collect()).collect();
    let mut report = CheckReport::default();
    let mut sc = Scaling {
        measure: "omega-cross",
        group: cfg.group,
        is_delta: false,
        fixed_other: None,
        expected: expected::OMEGA_CROSS,
        margin: cfg.slope_margin,
    };
    add_scaling(&mut report, &sc, &scales, &quoted);
    sc.measure = "omega-cross:transport";
    add_scaling(&mut report, &sc, &scales, &transport);
    // exactness on bundle-induced data
    let induced: Vec<(u64, f64)> = cfg
        .seed_list(50)
        .par_iter()
        .map(|&s| {
            let mut rng = rng_for(s, 6);
            let g = random_induced(&complex, cfg.group, &mut rng)?;
            Ok((s, omega_identity_defect(&g, &complex)?))
        })
        .collect::<Result<_>>()?;
    add_exact(&mut report, "omega-cross:induced", cfg.group, &induced, cfg.tol_exact);
    Ok(report)
}

/// Worst ‖Ω − I‖ over every ordering of every tetrahedron, both evaluations of Ω.
pub fn omega_identity_defect(g: &GerbeData, complex: &SimplicialComplex) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for t in tetra_cells(complex) {
        for o in orderings(&t) {
            let sweep = [o[0], o[1], o[2], o[3]];
            worst = worst.max(g.omega_group(sweep)?.distance_to_identity());
            worst = worst.max(g.omega_transport(sweep)?.distance_to_identity());
        }
    }
    Ok(worst)
}

/// Worst ‖F5⁻¹F1F2F3F4 − I‖ over every ordering of every 4-cell.
pub fn cocycle_identity_defect(g: &GerbeData, complex: &SimplicialComplex) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for c in four_cells(complex) {
        for o in orderings(&c) {
            worst = worst.max(g.cocycle_defect_group([o[0], o[1], o[2], o[3], o[4]])?.distance_to_identity());
        }
    }
    Ok(worst)
}

/// Alternated group defect and linear pieces on one 4-cell:
/// (R, Alt log D, Alt(dω + μ·ω)).
pub fn cocycle_alternated(
    g: &GerbeData,
    lin: &crate::gerbe::LinearGerbeData,
    cell: [usize; 5],
) -> Result<(AlgebraElement, AlgebraElement, AlgebraElement)> {
    let add = |acc: &mut AlgebraElement, s: f64, t: AlgebraElement| *acc += t.scale(s);
    let residual = lin.cocycle_residual(cell)?;
    let log_d = alternate_4cell(cell, AlgebraElement::zero(), |c| g.cocycle_defect_group(c)?.log(), add)?;
    let linear = alternate_4cell(
        cell,
        AlgebraElement::zero(),
        |c| {
            let (dw, mw, _) = cocycle_terms(&lin.mu, &lin.b, c)?;
            Ok(dw + mw)
        },
        add,
    )?;
    Ok((residual, log_d, linear))
}

fn cocycle(cfg: &RunConfig) -> Result<CheckReport> {
    let complex = cfg.complex_or("delta4")?;
    let scales = cfg.eps_list();
    let samples = sweep(&cfg.seed_list(20), &scales, |s, eps| {
        let mut rng = rng_for(s, 7);
        let lin = smooth_linear_gerbe(&complex, eps, &mut rng);
        let g = GerbeData::from_linear(cfg.group, &lin)?;
        let (mut r, mut lr, mut lw, mut size) = (0.0, 0.0, 0.0, 0.0);
        for cell in four_cells(&complex) {
            let (residual, log_d, linear) = cocycle_alternated(&g, &lin, cell)?;
            r += residual.norm();
            lr += (log_d - residual).norm();
            lw += (log_d + linear).norm();
            size += linear.norm();
        }
        Ok([(s, size, r), (s, size, lr), (s, size, lw)])
    })?;
    let pick = |k: usize| -> Vec<Samples> { samples.iter().map(|v| v.iter().map(|(_, x)| x[k]).collect()).collect() };
    let mut report = CheckReport::default();
    let mut sc = Scaling {
        measure: "cocycle",
        group: cfg.group,
        is_delta: false,
        fixed_other: None,
        expected: expected::COCYCLE,
        margin: cfg.slope_margin,
    };
    add_scaling(&mut report, &sc, &scales, &pick(0));
    sc.measure = "cocycle:group";
    sc.expected = expected::COCYCLE_GROUP;
    add_scaling(&mut report, &sc, &scales, &pick(1));
    let (_, info, slope) = Scaling { measure: "cocycle:group-vs-dw", ..sc }.rows_and_measure(&scales, &pick(2));
    report.notes.push(format!(
        "cocycle: ||Alt log D + Alt(dw + mu.w)|| slope {:.3} (max {:.3e}); the group defect tracks -(dw + mu.w), not the full residual",
        slope, info.max_residual
    ));
    let induced: Vec<(u64, f64)> = cfg
        .seed_list(50)
        .par_iter()
        .map(|&s| {
            let mut rng = rng_for(s, 8);
            let g = random_induced(&complex, cfg.group, &mut rng)?;
            Ok((s, cocycle_identity_defect(&g, &complex)?))
        })
        .collect::<Result<_>>()?;
    add_exact(&mut report, "cocycle:induced", cfg.group, &induced, cfg.tol_exact);
    Ok(report)
}

fn gauge(cfg: &RunConfig) -> Result<CheckReport> {
    let complex = cfg.complex_or("delta4")?;
    let eps = cfg.fixed_eps(1e-2);
    let scales = cfg.delta_list();
    let samples = sweep(&cfg.seed_list(10), &scales, |s, delta| {
        let mut rng = rng_for(s, 9);
        let lin = amplitude_linear_gerbe(&complex, eps, &mut rng);
        let h = amplitude_gauge(&complex, delta, &mut rng);
        let out = gauge_transform_linear(&lin, &h, &complex)?;
        let nu_size: f64 = out.predicted_nu.iter().map(|(_, v)| v.norm()).sum();
        let om_size: f64 = out.predicted_omega.iter().map(|(_, v)| v.norm()).sum();
        Ok([(s, nu_size, out.nu_mismatch()?), (s, om_size, out.omega_mismatch()?)])
    })?;
    let pick = |k: usize| -> Vec<Samples> { samples.iter().map(|v| v.iter().map(|(_, x)| x[k]).collect()).collect() };
    let mut report = CheckReport::default();
    let mut sc = Scaling {
        measure: "gauge:nu",
        group: cfg.group,
        is_delta: true,
        fixed_other: Some(eps),
        expected: expected::GAUGE,
        margin: cfg.slope_margin,
    };
    add_scaling(&mut report, &sc, &scales, &pick(0));
    sc.measure = "gauge:omega";
    add_scaling(&mut report, &sc, &scales, &pick(1));
    Ok(report)
}

/// Worst deviation after sweeping every backtrack (x,z,x) next to every edge (x,y),
/// plus any degenerate-loop violations.
pub fn zigzag_on<R: Rng>(g: &GerbeData, complex: &SimplicialComplex, tol: f64, rng: &mut R) -> Result<f64> {
    let group = g.group();
    let mut worst = g.zigzag_check(tol).iter().map(|v| v.deviation).fold(0.0, f64::max);
    for e in complex.cells(1) {
        for (x, z) in [(e[0], e[1]), (e[1], e[0])] {
            for y in complex.neighbors(x).into_iter().filter(|&y| y != z) {
                let u_xz = random_group(rng, group);
                let u_zx = g.phi(z, x)?.apply_group(&u_xz.inverse());
                let u_xy = random_group(rng, group);
                // (x, z, x, y) with the backtrack in front
                let s = SectionData::new(EdgePath::new(vec![x, z, x, y]), vec![u_xz, u_zx, u_xy])?;
                let out = sweep_backtrack(g, &s, 1)?;
                worst = worst.max(section_deviation(&out, &[x, y], &[u_xy]));
                // (y, x, z, x) with the backtrack at the end
                let u_yx = random_group(rng, group);
                let s = SectionData::new(EdgePath::new(vec![y, x, z, x]), vec![u_yx, u_xz, u_zx])?;
                let out = sweep_backtrack(g, &s, 2)?;
                worst = worst.max(section_deviation(&out, &[y, x], &[u_yx]));
            }
        }
    }
    Ok(worst)
}

fn section_deviation(s: &SectionData, path: &[usize], arrows: &[GroupElement]) -> f64 {
    if s.path.vertices() != path || s.arrows.len() != arrows.len() {
        return f64::INFINITY;
    }
    s.arrows.iter().zip(arrows).map(|(a, b)| a.distance(b)).fold(0.0, f64::max)
}

fn zigzag(cfg: &RunConfig) -> Result<CheckReport> {
    let complex = cfg.complex_or("delta4")?;
    let samples: Vec<(u64, f64)> = cfg
        .seed_list(50)
        .par_iter()
        .map(|&s| {
            let mut rng = rng_for(s, 10);
            let g = random_induced(&complex, cfg.group, &mut rng)?;
            Ok((s, zigzag_on(&g, &complex, cfg.tol_exact, &mut rng)?))
        })
        .collect::<Result<_>>()?;
    let mut report = CheckReport::default();
    add_exact(&mut report, "zigzag", cfg.group, &samples, cfg.tol_exact);
    Ok(report)
}

fn bf(cfg: &RunConfig) -> Result<CheckReport> {
    let complex = cfg.complex_or("boundary5")?;
    let eps = cfg.fixed_eps(1e-3);
    let scales = cfg.delta_list();
    let seeds = cfg.seed_list(10);
    let samples = sweep(&seeds, &scales, |s, delta| {
        let mut rng = rng_for(s, 11);
        let lin = amplitude_linear_gerbe(&complex, eps, &mut rng);
        let h = amplitude_gauge(&complex, delta, &mut rng);
        let out = gauge_transform_linear(&lin, &h, &complex)?;
        let s0 = bf_action(&lin, &complex)?;
        let s1 = bf_action(&out.transformed, &complex)?;
        let oracle = (s0 - bf_action_bruteforce(&lin, &complex)?).abs();
        Ok(((s, s0, (s1 - s0).abs()), (s, oracle)))
    })?;
    let variation: Vec<Samples> = samples.iter().map(|v| v.iter().map(|(_, x)| x.0).collect()).collect();
    let mut report = CheckReport::default();
    let sc = Scaling {
        measure: "bf",
        group: cfg.group,
        is_delta: true,
        fixed_other: Some(eps),
        expected: expected::BF,
        margin: cfg.slope_margin,
    };
    add_scaling(&mut report, &sc, &scales, &variation);
    let per_seed: Vec<f64> = seeds
        .iter()
        .enumerate()
        .map(|(i, _)| loglog_slope(&scales, &variation.iter().map(|v| v[i].2).collect::<Vec<_>>()))
        .collect();
    report.notes.push(format!(
        "bf: per-seed slopes min {:.3} max {:.3}",
        per_seed.iter().copied().fold(f64::INFINITY, f64::min),
        per_seed.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    ));
    let oracle: Vec<(u64, f64)> = samples[0].iter().map(|(_, x)| x.1).collect();
    add_exact(&mut report, "bf:oracle", cfg.group, &oracle, 1e-12);
    Ok(report)
}

/// Checks on supplied field data: every residual must vanish within tolerance.
fn exact_mode(name: &str, cfg: &RunConfig, fields: &FieldFile) -> Result<CheckReport> {
    if fields.group != cfg.group {
        return Err(Error::GroupMismatch { expected: cfg.group.to_string(), found: fields.group.to_string() });
    }
    let complex = match &cfg.complex {
        Some(c) => resolve_complex(c)?,
        None => infer_complex(fields)?,
    };
    let mut rng = rng_for(cfg.seed, 12);
    let residual = match name {
        "bianchi-exact" => bianchi_exact_on(&fields.bundle()?, &complex)?,
        "naturality" => naturality_on(&fields.gerbe()?, 100, &mut rng)?,
        "omega-cross" => omega_identity_defect(&fields.gerbe()?, &complex)?,
        "cocycle" => {
            let g = fields.gerbe()?;
            let lin = g.linearize()?;
            let mut worst = cocycle_identity_defect(&g, &complex)?;
            for c in four_cells(&complex) {
                worst = worst.max(lin.cocycle_residual(c)?.norm());
            }
            worst
        }
        "zigzag" => zigzag_on(&fields.gerbe()?, &complex, cfg.tol_exact, &mut rng)?,
        "bianchi-linear" | "fake-curvature" | "gauge" | "bf" => {
            return Err(Error::Invalid(format!("check {name} is a scaling check and takes no field file")))
        }
        _ => return Err(Error::Unknown { kind: "check", name: name.to_string() }),
    };
    let mut report = CheckReport { name: name.to_string(), ..Default::default() };
    add_exact(&mut report, name, cfg.group, &[(cfg.seed, residual)], cfg.tol_exact);
    Ok(report)
}

/// Clique complex on the edges named in the field file.
fn infer_complex(fields: &FieldFile) -> Result<SimplicialComplex> {
    let keys = if fields.edges.is_empty() { &fields.phi } else { &fields.edges };
    let edges: Vec<[usize; 2]> = keys
        .keys()
        .map(|k| {
            let v = crate::simplicial::parse_cell_key(k)?;
            Ok([v[0], *v.get(1).ok_or_else(|| Error::Invalid(format!("bad edge key '{k}'")))?])
        })
        .collect::<Result<_>>()?;
    let n = edges.iter().flatten().map(|v| v + 1).max().unwrap_or(0);
    SimplicialComplex::clique_complex(n, &edges, 4)
}
