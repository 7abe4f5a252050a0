use std::f64::consts::{PI, SQRT_2};

use serde_json::{json, Value};

use super::config::{ConfigError, Mode, ScenarioConfig};
use super::output::{Cell, CheckEntry, Summary, Table};
use crate::checks::run_property_suite;
use crate::diffraction::{cornu_spiral, shutter_density, u0, ShutterQuery};
use crate::spectral::{
    convergence_study, energy_expectation, expectation_position, is_non_increasing,
    linear_field_level, norm_at, solve_quench, survival_probability, BasisKind, BasisSpec,
    ConvergenceRow, PerturbationSpec, DEFAULT_BASIS_SIZE,
};
use crate::numerics::Grid1D;
use crate::systems::{
    density_center, evolve_ground_state, evolve_ground_state_stepped, oscillation_period, relative_density,
    DeuteronParams,
};
use crate::Error;

/// Errors below this are round-off and carry no ordering.
pub const CONVERGENCE_FLOOR: f64 = 1e-12;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("numerical error: {0}")]
    Numeric(#[from] Error),
}

type Run<T> = std::result::Result<T, RunError>;

/// Computes every table and check for the configured mode. Nothing is
/// written here.
pub fn compute(cfg: &ScenarioConfig) -> Run<Summary> {
    match cfg.mode {
        Mode::Deuteron => deuteron(cfg),
        Mode::Diffraction => diffraction(cfg),
        Mode::Spectral => spectral(cfg),
        Mode::KernelsCheck => kernels_check(),
    }
}

fn finite(cfg: &ScenarioConfig, key: &str, default: f64) -> Run<f64> {
    Ok(cfg.scalar_or(key, default)?)
}

fn max_abs_dev(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |m, v| m.max(v.abs()))
}

fn deuteron(cfg: &ScenarioConfig) -> Run<Summary> {
    let omega = cfg.positive("omega")?;
    let field = cfg.scalar("field")?;
    let k_com: [f64; 3] = if cfg.has("k_com") {
        cfg.list("k_com")?
            .try_into()
            .map_err(|v: Vec<f64>| ConfigError::new("k_com", format!("expected 3 components, got {}", v.len())))?
    } else {
        [0.0; 3]
    };
    // `direct` applies the single-step kernels and so fails at caustics.
    let direct = match cfg.get("propagation").unwrap_or("stepped") {
        "stepped" => false,
        "direct" => true,
        other => return Err(ConfigError::new("propagation", format!("expected stepped or direct, got `{other}`")).into()),
    };
    let times = cfg.times()?;
    let slice_points = cfg.count_or("slice_points", 0)?;
    if slice_points == 1 {
        return Err(ConfigError::new("slice_points", "need at least 2 points").into());
    }
    let half_width = if cfg.has("slice_half_width") {
        cfg.positive("slice_half_width")?
    } else {
        5.0 / omega.sqrt()
    };

    let p = DeuteronParams::new(omega, field, k_com)?;
    let evolve = |t: f64| if direct { evolve_ground_state(&p, t) } else { evolve_ground_state_stepped(&p, t) };
    let mut table = Table::new(&["t", "center", "peak_density", "norm"]);
    let (mut center_dev, mut peak_dev, mut norm_dev) = (0.0f64, 0.0f64, 0.0f64);
    let peak_exact = (omega / PI).powf(1.5);
    for &t in &times {
        let state = evolve(t)?;
        let center = state.relative_z.center();
        let (_, peak) = state.density_peak();
        let norm = state.norm();
        center_dev = center_dev.max((center - density_center(&p, t)).abs());
        peak_dev = peak_dev.max((peak - peak_exact).abs());
        norm_dev = norm_dev.max((norm - 1.0).abs());
        table.push(vec![t.into(), center.into(), peak.into(), norm.into()]);
    }

    let mut s = Summary::new(cfg.mode.as_str(), table);
    s.params.insert("omega".into(), json!(omega));
    s.params.insert("field".into(), json!(field));
    s.params.insert("k_com".into(), json!(k_com));
    s.params.insert("propagation".into(), json!(if direct { "direct" } else { "stepped" }));
    s.params.insert("times".into(), json!(times));
    s.derived.insert("period".into(), json!(oscillation_period(&p)));
    s.derived.insert("amplitude".into(), json!(p.amplitude()));
    s.derived.insert("peak_density".into(), json!(peak_exact));
    s.checks.insert("center_deviation".into(), CheckEntry::new(center_dev, 1e-9));
    s.checks.insert("peak_density_deviation".into(), CheckEntry::new(peak_dev, 1e-9));
    s.checks.insert("norm_deviation".into(), CheckEntry::new(norm_dev, 1e-9));

    if slice_points >= 2 {
        let lo = (-p.amplitude()).min(0.0) - half_width;
        let hi = (-p.amplitude()).max(0.0) + half_width;
        let mut slices = Table::new(&["t", "z", "density"]);
        for &t in &times {
            let state = evolve(t)?;
            for i in 0..slice_points {
                let z = lo + (hi - lo) * i as f64 / (slice_points - 1) as f64;
                slices.push(vec![t.into(), z.into(), state.relative_density(0.0, 0.0, z).into()]);
            }
        }
        let closed = slices.rows.iter().map(|r| {
            let (t, z, d) = (r[0].as_f64().unwrap(), r[1].as_f64().unwrap(), r[2].as_f64().unwrap());
            d - relative_density(&p, 0.0, 0.0, z, t)
        });
        s.checks.insert("slice_deviation".into(), CheckEntry::new(max_abs_dev(closed), 1e-9));
        s.sidecars.insert("slices".into(), slices);
    }
    Ok(s)
}

fn diffraction(cfg: &ScenarioConfig) -> Run<Summary> {
    let k = cfg.scalar("k")?;
    let t = cfg.positive("t")?;
    let x_min = cfg.scalar("x_min")?;
    let x_max = cfg.scalar("x_max")?;
    if !(x_max > x_min) {
        return Err(ConfigError::new("x_max", format!("must exceed x_min = {x_min}")).into());
    }
    let x_points = cfg.count_or("x_points", 201)?;
    if x_points < 2 {
        return Err(ConfigError::new("x_points", "need at least 2 points").into());
    }
    let cu_min = finite(cfg, "cornu_u_min", -5.0)?;
    let cu_max = finite(cfg, "cornu_u_max", 5.0)?;
    if !(cu_max > cu_min) {
        return Err(ConfigError::new("cornu_u_max", format!("must exceed cornu_u_min = {cu_min}")).into());
    }
    let cornu_points = cfg.count_or("cornu_points", 401)?;
    if cornu_points < 2 {
        return Err(ConfigError::new("cornu_points", "need at least 2 points").into());
    }

    let mut table = Table::new(&["x", "u0", "density"]);
    for i in 0..x_points {
        let x = if i + 1 == x_points { x_max } else { x_min + (x_max - x_min) * i as f64 / (x_points - 1) as f64 };
        let q = ShutterQuery::new(x, k, t)?;
        table.push(vec![x.into(), u0(&q).into(), shutter_density(&q).into()]);
    }
    let mut cornu = Table::new(&["u", "c", "s"]);
    for p in cornu_spiral(cu_min, cu_max, cornu_points)? {
        cornu.push(vec![p.u.into(), p.c.into(), p.s.into()]);
    }
    let front = ShutterQuery::new(k * t, k, t)?;

    let mut s = Summary::new(cfg.mode.as_str(), table);
    s.params.insert("k".into(), json!(k));
    s.params.insert("t".into(), json!(t));
    s.params.insert("x_min".into(), json!(x_min));
    s.params.insert("x_max".into(), json!(x_max));
    s.params.insert("x_points".into(), json!(x_points));
    s.derived.insert("wavefront".into(), json!(k * t));
    s.derived.insert("density_limit".into(), json!(1.0));
    // The form without the overall ½ saturates at 2 instead.
    s.derived.insert("printed_convention_limit".into(), json!(2.0));
    s.checks.insert(
        "quarter_point_deviation".into(),
        CheckEntry::new((shutter_density(&front) - 0.25).abs(), 1e-10),
    );
    s.sidecars.insert("cornu".into(), cornu);
    Ok(s)
}

/// Quadrature grid given explicitly in the config.
#[derive(Debug, Clone, Copy)]
struct GridKeys {
    min: f64,
    max: f64,
    points: usize,
}

fn grid_keys(cfg: &ScenarioConfig) -> Run<Option<GridKeys>> {
    let given = ["grid_min", "grid_max", "grid_points"].map(|k| cfg.has(k));
    if given.iter().all(|g| !g) {
        return Ok(None);
    }
    let min = cfg.scalar("grid_min")?;
    let max = cfg.scalar("grid_max")?;
    let points = cfg.count("grid_points")?;
    if !(max > min) {
        return Err(ConfigError::new("grid_max", format!("must exceed grid_min = {min}")).into());
    }
    if points < 3 {
        return Err(ConfigError::new("grid_points", "need at least 3 points").into());
    }
    Ok(Some(GridKeys { min, max, points }))
}

enum Perturbation {
    None,
    Linear(f64),
    Step { height: f64, position: f64 },
}

impl Perturbation {
    fn build(&self, basis: &BasisSpec, grid: Option<&GridKeys>) -> crate::Result<PerturbationSpec> {
        let grid = match grid {
            Some(g) => Grid1D::new(g.min, g.max, g.points)?,
            None => basis.default_grid(),
        };
        Ok(
        match *self {
            Perturbation::None => PerturbationSpec::zero(grid),
            Perturbation::Linear(slope) => PerturbationSpec::linear(slope, grid),
            Perturbation::Step { height, position } => {
                PerturbationSpec::new(move |x| if x >= position { height } else { 0.0 }, grid)
            }
        })
    }

    fn slope(&self) -> Option<f64> {
        match *self {
            Perturbation::None => Some(0.0),
            Perturbation::Linear(s) => Some(s),
            Perturbation::Step { .. } => None,
        }
    }
}

fn spectral(cfg: &ScenarioConfig) -> Run<Summary> {
    let kind = match cfg.get("basis").unwrap_or("oscillator") {
        "oscillator" => BasisKind::Oscillator { omega: cfg.positive("omega")? },
        "box" => BasisKind::Box { length: cfg.positive("box_length")? },
        other => return Err(ConfigError::new("basis", format!("expected oscillator or box, got `{other}`")).into()),
    };
    let n_basis = cfg.count_or("n_basis", DEFAULT_BASIS_SIZE)?;
    let nu = cfg.count_or("nu", 0)?;
    if n_basis == 0 {
        return Err(ConfigError::new("n_basis", "must be at least 1").into());
    }
    if nu >= n_basis {
        return Err(ConfigError::new("nu", format!("must be below n_basis = {n_basis}")).into());
    }
    let perturbation = match cfg.get("perturbation").unwrap_or("none") {
        "none" => Perturbation::None,
        "linear" => Perturbation::Linear(cfg.scalar("slope")?),
        "deuteron" => Perturbation::Linear(cfg.scalar("field")? / SQRT_2),
        "step" => Perturbation::Step { height: cfg.scalar("step_height")?, position: cfg.scalar("step_position")? },
        other => {
            return Err(ConfigError::new(
                "perturbation",
                format!("expected none, linear, deuteron or step, got `{other}`"),
            )
            .into())
        }
    };
    let grid = grid_keys(cfg)?;
    let times = cfg.times()?;
    let sizes: Vec<usize> = if cfg.has("convergence_sizes") {
        cfg.list("convergence_sizes")?
            .into_iter()
            .map(|v| {
                if v.fract() == 0.0 && v as usize > nu {
                    Ok(v as usize)
                } else {
                    Err(ConfigError::new("convergence_sizes", format!("sizes must be integers above nu = {nu}, got {v}")))
                }
            })
            .collect::<Result<_, _>>()?
    } else {
        Vec::new()
    };

    let make_basis = |size: usize| match kind {
        BasisKind::Oscillator { omega } => BasisSpec::oscillator(omega, size),
        BasisKind::Box { length } => BasisSpec::box_basis(length, size),
    };
    let basis = make_basis(n_basis)?;
    let pert = perturbation.build(&basis, grid.as_ref())?;
    let sol = solve_quench(&basis, &pert, nu)?;

    // Linear force on an oscillator: Ehrenfest gives the exact mean position
    // for every initial eigenstate.
    let closed_center = match (kind, perturbation.slope()) {
        (BasisKind::Oscillator { omega }, Some(slope)) => {
            Some(move |t: f64| -(slope / (omega * omega)) * (1.0 - (omega * t).cos()))
        }
        _ => None,
    };

    let e0 = energy_expectation(&sol, 0.0);
    let mut table = Table::new(&["t", "survival", "expect_x", "norm", "energy"]);
    let (mut norm_dev, mut energy_dev, mut center_dev) = (0.0f64, 0.0f64, 0.0f64);
    for &t in &times {
        let x = expectation_position(&sol, &basis, t)?;
        let norm = norm_at(&sol, t);
        let energy = energy_expectation(&sol, t);
        norm_dev = norm_dev.max((norm - 1.0).abs());
        energy_dev = energy_dev.max((energy - e0).abs());
        if let Some(f) = closed_center {
            center_dev = center_dev.max((x - f(t)).abs());
        }
        table.push(vec![t.into(), survival_probability(&sol, t).into(), x.into(), norm.into(), energy.into()]);
    }

    let mut s = Summary::new(cfg.mode.as_str(), table);
    match kind {
        BasisKind::Oscillator { omega } => {
            s.params.insert("basis".into(), json!("oscillator"));
            s.params.insert("omega".into(), json!(omega));
        }
        BasisKind::Box { length } => {
            s.params.insert("basis".into(), json!("box"));
            s.params.insert("box_length".into(), json!(length));
        }
    }
    s.params.insert("n_basis".into(), json!(n_basis));
    s.params.insert("nu".into(), json!(nu));
    let pert_json = match perturbation {
        Perturbation::None => json!({"kind": "none"}),
        Perturbation::Linear(slope) => json!({"kind": "linear", "slope": slope}),
        Perturbation::Step { height, position } => json!({"kind": "step", "height": height, "position": position}),
    };
    s.params.insert("perturbation".into(), pert_json);
    if let Some(g) = grid {
        s.params.insert("grid".into(), json!({"min": g.min, "max": g.max, "points": g.points}));
    }
    s.params.insert("times".into(), json!(times));
    s.derived.insert("eigenvalues".into(), json!(sol.eigenvalues()));

    s.checks.insert("norm_deviation".into(), CheckEntry::new(norm_dev, 1e-9));
    s.checks.insert("energy_drift".into(), CheckEntry::new(energy_dev, 1e-9));
    if closed_center.is_some() {
        s.checks.insert("expect_x_deviation".into(), CheckEntry::new(center_dev, 1e-6));
    }
    if let (BasisKind::Oscillator { omega }, Some(slope)) = (kind, perturbation.slope()) {
        // Only the lowest levels of a truncated basis are expected to be exact.
        let top = (n_basis / 6).min(10);
        let dev = max_abs_dev((0..=top).map(|n| sol.eigenvalues()[n] - linear_field_level(omega, slope, n)));
        s.checks.insert("level_deviation".into(), CheckEntry::new(dev, 1e-8));
    }

    if !sizes.is_empty() {
        let (rows, reference) =
            convergence(&sizes, &times, nu, &make_basis, &perturbation, grid.as_ref(), closed_center)?;
        let mut conv = Table::new(&["n_basis", "max_error"]);
        for r in &rows {
            conv.push(vec![r.size.into(), r.max_error.into()]);
        }
        let excess = rows
            .windows(2)
            .map(|w| (w[1].max_error - w[0].max_error.max(CONVERGENCE_FLOOR)).max(0.0))
            .fold(0.0, f64::max);
        debug_assert_eq!(excess == 0.0, is_non_increasing(&rows, CONVERGENCE_FLOOR));
        s.derived.insert("convergence_reference".into(), json!(reference));
        s.derived.insert("convergence_floor".into(), json!(CONVERGENCE_FLOOR));
        s.checks.insert("convergence_non_increasing".into(), CheckEntry::new(excess, 0.0));
        s.sidecars.insert("convergence".into(), conv);
    }
    Ok(s)
}

type BasisFactory<'a> = dyn Fn(usize) -> crate::Result<BasisSpec> + 'a;

/// Errors of `⟨x⟩(t)` against the closed form when there is one, otherwise
/// against the largest basis in the list.
fn convergence(
    sizes: &[usize],
    times: &[f64],
    nu: usize,
    make_basis: &BasisFactory<'_>,
    perturbation: &Perturbation,
    grid: Option<&GridKeys>,
    closed: Option<impl Fn(f64) -> f64>,
) -> Run<(Vec<ConvergenceRow>, &'static str)> {
    let setup = |n: usize| {
        let b = make_basis(n)?;
        let p = perturbation.build(&b, grid)?;
        Ok((b, p))
    };
    if let Some(f) = closed {
        return Ok((convergence_study(sizes, times, nu, setup, f)?, "closed_form"));
    }
    let largest = *sizes.iter().max().expect("non-empty");
    let (b, p) = setup(largest)?;
    let sol = solve_quench(&b, &p, nu)?;
    let reference: Vec<f64> = times
        .iter()
        .map(|&t| expectation_position(&sol, &b, t))
        .collect::<crate::Result<_>>()?;
    let lookup = |t: f64| {
        let i = times.iter().position(|&s| s == t).expect("time from the same list");
        reference[i]
    };
    Ok((convergence_study(sizes, times, nu, setup, lookup)?, "largest_basis"))
}

fn kernels_check() -> Run<Summary> {
    let outcomes = run_property_suite()?;
    let mut table = Table::new(&["check", "value", "tolerance", "pass"]);
    let mut s = Summary::new(Mode::KernelsCheck.as_str(), Table::new(&[]));
    for c in &outcomes {
        table.push(vec![Cell::Text(c.name.clone()), c.value.into(), c.tolerance.into(), c.passed.into()]);
        s.checks.insert(c.name.clone(), c.into());
    }
    s.table = table;
    s.derived.insert("count".into(), Value::from(outcomes.len()));
    Ok(s)
}
