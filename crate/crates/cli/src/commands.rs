//! One function per subcommand. Each returns the result table plus the
//! worst per-row exit class (0 when every row computed cleanly).
//!
//! Grid-driven commands never abort on a row failure: the row is kept
//! as NaN cells with the reason in the trailing note column, and the
//! failure class is folded into the returned code. Single-point
//! invocations propagate the error instead.

use std::f64::consts::PI;

use rayon::prelude::*;
use spinslab::{
    bloch_trajectory, pancharatnam_oracle, prebarrier_gp, resonant_gp, resonances_for_kl,
    spec_from_pair, tunnel_gp, AmplitudeField, Region, ResonanceSpec, ScatterParams, SpinState,
    UnitsBridge,
};

use crate::app::{resolve_ratio, severity, CliError, Settings};
use crate::table::{Cell, Table};

const DEFAULT_TOL: f64 = 1e-10;
const DEFAULT_MESH: usize = 10_000;

fn float(v: f64) -> Cell {
    Cell::Float(v)
}

fn text(s: impl Into<String>) -> Cell {
    Cell::Text(s.into())
}

/// Scattering parameters from whichever thickness flag is present;
/// `kminus-l` wins when both are given.
fn params_from(s: &Settings, epsilon: f64) -> Result<ScatterParams, CliError> {
    if let Some(kml) = s.f64("kminus-l")? {
        return Ok(ScatterParams::from_kminus(epsilon, kml)?);
    }
    if let Some(kl) = s.f64("kl")? {
        return Ok(ScatterParams::new(epsilon, kl)?);
    }
    Err(CliError::invalid("give a thickness: --kl or --kminus-l"))
}

/// Sweep helper: runs `compute` over the grid in parallel, appending
/// one row per point. `fill` renders a successful value; failures
/// become NaN cells with the reason in the note column.
fn sweep_rows<T: Send>(
    table: &mut Table,
    grid: &[f64],
    nan_cells: usize,
    compute: impl Fn(f64) -> Result<T, spinslab::Error> + Sync,
    fill: impl Fn(T) -> Vec<Cell>,
) -> u8 {
    let results: Vec<(f64, Result<T, spinslab::Error>)> = grid
        .par_iter()
        .map(|&x| (x, compute(x)))
        .collect();
    let mut worst = 0u8;
    for (x, res) in results {
        match res {
            Ok(v) => {
                let mut row = vec![float(x)];
                row.extend(fill(v));
                row.push(text(""));
                table.push(row);
            }
            Err(e) => {
                worst = worst.max(severity(&e));
                let mut row = vec![float(x)];
                row.extend(std::iter::repeat(float(f64::NAN)).take(nan_cells));
                row.push(text(e.to_string()));
                table.push(row);
            }
        }
    }
    worst
}

/// Interior geometric phase per winding turn at a lattice point, over
/// a spin-angle grid.
pub fn run_resonant(s: &Settings) -> Result<(Table, u8), CliError> {
    let tol = s.f64_or("tol", DEFAULT_TOL)?;
    let phi = s.f64_or("phi", 0.0)?;
    let (n_plus, n_minus, ratio_note) = match (s.u32("n-plus")?, s.u32("n-minus")?) {
        (Some(a), Some(b)) => (a, b, None),
        (None, None) => {
            let raw = s.get("q").ok_or_else(|| {
                CliError::invalid("resonant-gp needs --n-plus and --n-minus, or --q")
            })?;
            let choice = resolve_ratio(raw)?;
            (choice.n_plus, choice.n_minus, Some(choice.note))
        }
        _ => {
            return Err(CliError::invalid(
                "give both --n-plus and --n-minus, or --q alone",
            ))
        }
    };
    // validate the pair before sweeping so a parity error is fatal
    let spec = spec_from_pair(n_plus, n_minus)?;

    let mut table = Table::new(
        "resonant-gp.v1",
        &["theta", "gp_per_turn", "gp_ideal", "difference", "note"],
    );
    if let Some(note) = ratio_note {
        table.meta("note", note);
    }
    table.meta("n_plus", n_plus);
    table.meta("n_minus", n_minus);
    table.meta("xi", spec.xi);
    table.meta("epsilon", spec.epsilon);
    table.meta("kl", spec.kl);
    table.meta("phi", phi);
    table.meta("tol", tol);
    table.meta("gp_ideal_reference", "-pi (1 - cos theta)");

    let grid = s.grid("grid")?;
    let single = grid.is_none();
    let thetas = match grid {
        Some(g) => g,
        None => vec![s.req_f64("theta")?],
    };
    if single {
        // no grid: fail loudly instead of emitting a NaN row
        let spin = SpinState::from_angles(thetas[0], phi)?;
        resonant_gp(n_plus, n_minus, &spin, tol)?;
    }
    let worst = sweep_rows(
        &mut table,
        &thetas,
        3,
        |theta| {
            let spin = SpinState::from_angles(theta, phi)?;
            let res = resonant_gp(n_plus, n_minus, &spin, tol)?;
            Ok((theta, res.per_turn))
        },
        |(theta, per_turn)| {
            let ideal = -PI * (1.0 - theta.cos());
            vec![float(per_turn), float(ideal), float(per_turn - ideal)]
        },
    );
    Ok((table, worst))
}

/// Incident-region geometric phase per cycle over a barrier-strength
/// grid, with resonance transparency points marked.
pub fn run_prebarrier(s: &Settings) -> Result<(Table, u8), CliError> {
    let tol = s.f64_or("tol", DEFAULT_TOL)?;
    let phi = s.f64_or("phi", 0.0)?;
    let theta = s.f64_or("theta", PI / 2.0)?;
    let kl = s.req_f64("kl")?;
    let spin = SpinState::from_angles(theta, phi)?;
    // transparency points of this thickness, for the marker column
    let lattice: Vec<f64> = resonances_for_kl(kl, false)?
        .iter()
        .map(|spec| spec.epsilon)
        .collect();

    let mut table = Table::new("prebarrier-gp.v1", &["epsilon", "gp", "resonant", "note"]);
    table.meta("kl", kl);
    table.meta("theta", theta);
    table.meta("phi", phi);
    table.meta("tol", tol);

    let grid = s.grid("grid")?;
    let single = grid.is_none();
    let epsilons = match grid {
        Some(g) => g,
        None => vec![s.req_f64("epsilon")?],
    };
    if single {
        let params = ScatterParams::new(epsilons[0], kl)?;
        prebarrier_gp(&params, &spin, tol)?;
    }
    let worst = sweep_rows(
        &mut table,
        &epsilons,
        2,
        |eps| {
            let params = ScatterParams::new(eps, kl)?;
            let gp = prebarrier_gp(&params, &spin, tol)?;
            let resonant = lattice.iter().any(|e| (e - eps).abs() < 1e-9);
            Ok((gp.raw, resonant))
        },
        |(gp, resonant)| vec![float(gp), Cell::Int(resonant as i64)],
    );
    Ok((table, worst))
}

/// Interior geometric phase of a tunneling traversal over a spin-angle
/// grid, with a polygonal-chain cross-check per row.
pub fn run_tunnel(s: &Settings) -> Result<(Table, u8), CliError> {
    let tol = s.f64_or("tol", DEFAULT_TOL)?;
    let phi = s.f64_or("phi", 0.0)?;
    let mesh = s.usize_or("mesh", DEFAULT_MESH)?;
    let epsilon = s.req_f64("epsilon")?;
    let params = params_from(s, epsilon)?;

    let mut table = Table::new(
        "tunnel-gp.v1",
        &["theta", "gp_raw", "gp_principal", "oracle_diff", "note"],
    );
    table.meta("epsilon", epsilon);
    table.meta("kl", params.kl);
    table.meta("kminus_l", params.kminus_l);
    table.meta("phi", phi);
    table.meta("tol", tol);
    table.meta("mesh", mesh);

    let grid = s.grid("grid")?;
    let single = grid.is_none();
    let thetas = match grid {
        Some(g) => g,
        None => vec![s.req_f64("theta")?],
    };
    if single {
        let spin = SpinState::from_angles(thetas[0], phi)?;
        tunnel_gp(&params, &spin, tol)?;
    }
    let worst = sweep_rows(
        &mut table,
        &thetas,
        3,
        |theta| {
            let spin = SpinState::from_angles(theta, phi)?;
            let gp = tunnel_gp(&params, &spin, tol)?;
            let field = AmplitudeField::new(&params, &spin, Region::Interior)?;
            let oracle = pancharatnam_oracle(&field, 0.0, PI, mesh)?;
            Ok((gp, (oracle - gp.raw).abs()))
        },
        |(gp, diff)| vec![float(gp.raw), float(gp.principal), float(diff)],
    );
    Ok((table, worst))
}

/// Polarization trace across one region.
pub fn run_trajectory(s: &Settings) -> Result<(Table, u8), CliError> {
    let phi = s.f64_or("phi", 0.0)?;
    let theta = s.req_f64("theta")?;
    let epsilon = s.req_f64("epsilon")?;
    let samples = s.usize_or("samples", 501)?;
    let params = params_from(s, epsilon)?;
    let region = match s.get("region").unwrap_or("interior") {
        "incident" => Region::Incident,
        "interior" => Region::Interior,
        "transmitted" => Region::Transmitted,
        other => {
            return Err(CliError::invalid(format!(
                "--region: expected incident, interior, or transmitted, got {other:?}"
            )))
        }
    };
    let spin = SpinState::from_angles(theta, phi)?;

    let mut table = Table::new(
        "trajectory.v1",
        &["s", "n_x", "n_y", "n_z", "norm", "note"],
    );
    table.meta("epsilon", epsilon);
    table.meta("kl", params.kl);
    table.meta("kminus_l", params.kminus_l);
    table.meta("theta", theta);
    table.meta("phi", phi);
    table.meta("region", s.get("region").unwrap_or("interior"));
    table.meta("samples", samples);

    let mut worst = 0u8;
    for sample in bloch_trajectory(&params, &spin, region, samples)? {
        match sample.n {
            Some([nx, ny, nz]) => table.push(vec![
                float(sample.s),
                float(nx),
                float(ny),
                float(nz),
                float(sample.norm),
                text(""),
            ]),
            None => {
                worst = worst.max(4);
                table.push(vec![
                    float(sample.s),
                    float(f64::NAN),
                    float(f64::NAN),
                    float(f64::NAN),
                    float(sample.norm),
                    text("norm below direction threshold"),
                ]);
            }
        }
    }
    Ok((table, worst))
}

/// Conversions between the mode ratio, beam speed, and field strength.
pub fn run_units(s: &Settings) -> Result<(Table, u8), CliError> {
    let bridge = UnitsBridge::default();
    let mut table = Table::new("units.v1", &["quantity", "value", "note"]);
    let push = |t: &mut Table, name: &str, v: f64, note: &str| {
        t.push(vec![text(name), float(v), text(note)]);
    };

    let q = s.f64("q")?;
    let speed = s.f64("speed")?;
    let field = s.f64("field")?;
    match (q, field, speed) {
        (Some(q), None, Some(v)) => {
            let b0 = bridge.field_for_speed(q, v)?;
            push(&mut table, "q", q, "");
            push(&mut table, "speed_m_per_s", v, "");
            push(&mut table, "field_T", b0, "");
        }
        (None, Some(b0), Some(v)) => {
            let eps = bridge.epsilon_for_physical(b0, v)?;
            push(&mut table, "field_T", b0, "");
            push(&mut table, "speed_m_per_s", v, "");
            push(&mut table, "epsilon", eps, "");
            if eps < 1.0 {
                push(&mut table, "q", ((1.0 + eps) / (1.0 - eps)).sqrt(), "");
            } else {
                table.push(vec![
                    text("q"),
                    float(f64::NAN),
                    text("no propagating mode ratio: epsilon >= 1"),
                ]);
            }
        }
        _ => {
            return Err(CliError::invalid(
                "units needs --q with --speed, or --field with --speed",
            ))
        }
    }
    if let Some(moment) = s.f64("moment")? {
        let factor = bridge.speed_scale_for_moment(moment)?;
        push(
            &mut table,
            "speed_scale",
            factor,
            "speed multiplier for the overridden moment",
        );
    }
    Ok((table, 0))
}

fn resonance_row(spec: &ResonanceSpec, length: Option<f64>) -> Result<Vec<Cell>, CliError> {
    let mut row = vec![
        Cell::Int(spec.n_plus as i64),
        Cell::Int(spec.n_minus as i64),
        Cell::Int(spec.xi as i64),
        float(spec.q),
        float(spec.epsilon),
        float(spec.kl),
        float(spec.kappa0_l),
    ];
    if let Some(length) = length {
        let point = spinslab::physical_point(spec, length, &UnitsBridge::default())?;
        row.push(float(point.speed));
        row.push(float(point.field));
    }
    row.push(text(""));
    Ok(row)
}

/// Simultaneous-transparency lattice points, for one thickness or a
/// thickness range.
pub fn run_resonances(s: &Settings) -> Result<(Table, u8), CliError> {
    let include_trivial = s.flag("include-trivial");
    let length = s.f64("length")?;
    let mut columns = vec!["n_plus", "n_minus", "xi", "q", "epsilon", "kl", "kappa0_l"];
    if length.is_some() {
        columns.push("speed_m_per_s");
        columns.push("field_T");
    }
    columns.push("note");
    let mut table = Table::new("resonances.v1", &columns);
    table.meta("include_trivial", include_trivial);
    if let Some(length) = length {
        table.meta("length_m", length);
    }

    let specs: Vec<ResonanceSpec> = if let Some(kl) = s.f64("kl")? {
        table.meta("kl", kl);
        resonances_for_kl(kl, include_trivial)?
    } else if let Some(grid) = s.grid("grid")? {
        // range scan: only the grid endpoints matter
        let lo = grid.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = grid.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if !(lo > 0.0) || !hi.is_finite() || hi < lo {
            return Err(CliError::invalid(format!(
                "--grid: thickness range must satisfy 0 < start <= stop, got [{lo}, {hi}]"
            )));
        }
        table.meta("kl_range", format!("[{lo}, {hi}]"));
        let cap = (hi * std::f64::consts::SQRT_2 / PI).ceil() as u32 + 1;
        let mut found = Vec::new();
        for n_minus in 1..=cap {
            for n_plus in 1..=n_minus {
                if (n_plus % 2) != (n_minus % 2) {
                    continue;
                }
                if n_plus == n_minus && !include_trivial {
                    continue;
                }
                let sum = (n_plus as f64).powi(2) + (n_minus as f64).powi(2);
                let kl = PI * (0.5 * sum).sqrt();
                if kl < lo || kl > hi {
                    continue;
                }
                // exact kl hits each lattice point exactly once
                let at_kl = resonances_for_kl(kl, include_trivial)?;
                found.extend(
                    at_kl
                        .into_iter()
                        .filter(|sp| sp.n_plus == n_plus && sp.n_minus == n_minus),
                );
            }
        }
        found.sort_by(|a, b| {
            a.kl.total_cmp(&b.kl)
                .then_with(|| a.n_plus.cmp(&b.n_plus))
        });
        found
    } else {
        return Err(CliError::invalid("resonances needs --kl or --grid"));
    };

    for spec in &specs {
        let row = resonance_row(spec, length)?;
        table.push(row);
    }
    Ok((table, 0))
}

/// Generic grid sweep over one named variable of one evaluator.
pub fn run_sweep(s: &Settings) -> Result<(Table, u8), CliError> {
    let tol = s.f64_or("tol", DEFAULT_TOL)?;
    let phi = s.f64_or("phi", 0.0)?;
    let evaluator = s
        .get("evaluator")
        .ok_or_else(|| CliError::invalid("sweep needs --evaluator prebarrier|tunnel|resonant"))?
        .to_string();
    let var = s
        .get("var")
        .ok_or_else(|| CliError::invalid("sweep needs --var epsilon|theta|kl|kminus-l"))?
        .to_string();
    if !["epsilon", "theta", "kl", "kminus-l"].contains(&var.as_str()) {
        return Err(CliError::invalid(format!(
            "--var: expected epsilon, theta, kl, or kminus-l, got {var:?}"
        )));
    }
    let grid = s
        .grid("grid")?
        .ok_or_else(|| CliError::invalid("sweep needs --grid start:stop:steps"))?;

    // fixed values come from flags; the swept one from the grid point
    let fixed = |key: &str| -> Result<Option<f64>, CliError> {
        if key == var {
            Ok(None)
        } else {
            s.f64(key)
        }
    };
    let need = |key: &str, v: Option<f64>| -> Result<f64, CliError> {
        v.ok_or_else(|| CliError::invalid(format!("sweep over {var} needs a fixed --{key}")))
    };

    let var_col = var.clone();
    let mut table = Table::new(
        "sweep.v1",
        &[var_col.as_str(), "gp_raw", "gp_principal", "note"],
    );
    table.meta("evaluator", &evaluator);
    table.meta("var", &var);
    table.meta("phi", phi);
    table.meta("tol", tol);

    let theta0 = fixed("theta")?;
    let eps0 = fixed("epsilon")?;
    let kl0 = fixed("kl")?;
    let kml0 = fixed("kminus-l")?;

    let worst = match evaluator.as_str() {
        "prebarrier" | "tunnel" => {
            let is_tunnel = evaluator == "tunnel";
            let spin_theta = match var.as_str() {
                "theta" => None,
                _ => Some(need("theta", theta0)?),
            };
            if var != "epsilon" {
                need("epsilon", eps0)?;
            }
            if var != "kl" && var != "kminus-l" && kl0.is_none() && kml0.is_none() {
                return Err(CliError::invalid("sweep needs a fixed --kl or --kminus-l"));
            }
            sweep_rows(
                &mut table,
                &grid,
                2,
                |x| {
                    let theta = if var == "theta" { x } else { spin_theta.unwrap() };
                    let eps = if var == "epsilon" { x } else { eps0.unwrap() };
                    let params = if var == "kminus-l" {
                        ScatterParams::from_kminus(eps, x)?
                    } else if var == "kl" {
                        ScatterParams::new(eps, x)?
                    } else if let Some(kml) = kml0 {
                        ScatterParams::from_kminus(eps, kml)?
                    } else {
                        ScatterParams::new(eps, kl0.unwrap())?
                    };
                    let spin = SpinState::from_angles(theta, phi)?;
                    let gp = if is_tunnel {
                        tunnel_gp(&params, &spin, tol)?
                    } else {
                        prebarrier_gp(&params, &spin, tol)?
                    };
                    Ok(gp)
                },
                |gp| vec![float(gp.raw), float(gp.principal)],
            )
        }
        "resonant" => {
            if var != "theta" {
                return Err(CliError::invalid(
                    "resonant sweeps vary theta only; the mode counts fix epsilon and kl",
                ));
            }
            let (n_plus, n_minus) = match (s.u32("n-plus")?, s.u32("n-minus")?) {
                (Some(a), Some(b)) => (a, b),
                (None, None) => {
                    let raw = s.get("q").ok_or_else(|| {
                        CliError::invalid("resonant sweep needs --n-plus/--n-minus or --q")
                    })?;
                    let choice = resolve_ratio(raw)?;
                    table.meta("note", choice.note.clone());
                    (choice.n_plus, choice.n_minus)
                }
                _ => {
                    return Err(CliError::invalid(
                        "give both --n-plus and --n-minus, or --q alone",
                    ))
                }
            };
            spec_from_pair(n_plus, n_minus)?;
            table.meta("n_plus", n_plus);
            table.meta("n_minus", n_minus);
            sweep_rows(
                &mut table,
                &grid,
                2,
                |theta| {
                    let spin = SpinState::from_angles(theta, phi)?;
                    let res = resonant_gp(n_plus, n_minus, &spin, tol)?;
                    Ok(res.value)
                },
                |gp| vec![float(gp.raw), float(gp.principal)],
            )
        }
        other => {
            return Err(CliError::invalid(format!(
                "--evaluator: expected prebarrier, tunnel, or resonant, got {other:?}"
            )))
        }
    };
    Ok((table, worst))
}
