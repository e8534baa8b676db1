//! Geometry selection by catalog id and named parameters.

use fourgeom::deformation::{deformed_geometry, LinearDeformation};
use fourgeom::geometry::{round_s4, EllipsoidS4, FrameField, Geometry, PageParams, PageSpace, S2xS2, PAGE_PSI_PERIOD};

use crate::error::{CliError, CliResult};

pub const GEOMETRY_IDS: [&str; 5] = ["round-s4", "ellipsoid-s4", "biaxial-s4", "page", "s2xs2"];

/// Parameter names and defaults of each family.
pub fn parameter_defaults(id: &str) -> CliResult<Vec<(&'static str, f64)>> {
    Ok(match id {
        "round-s4" => vec![("radius", 1.0)],
        "ellipsoid-s4" => vec![("r", 1.0), ("l", 1.0), ("lt", 1.0)],
        "biaxial-s4" => vec![("c1", 0.0), ("c2", 0.0), ("epsilon", 0.0)],
        "page" => {
            let p = PageParams::<f64>::standard();
            vec![("lambda", p.lambda), ("psi_period", PAGE_PSI_PERIOD)]
        }
        "s2xs2" => vec![("r1", 1.0), ("r2", 1.0)],
        other => {
            return Err(CliError::Usage(format!(
                "unknown geometry '{other}', expected one of {}",
                GEOMETRY_IDS.join(", ")
            )))
        }
    })
}

/// Fills defaults and rejects names the family does not have.
pub fn resolve_params(id: &str, given: &[(String, f64)]) -> CliResult<Vec<(&'static str, f64)>> {
    let mut p = parameter_defaults(id)?;
    for (name, v) in given {
        match p.iter_mut().find(|(k, _)| k == name) {
            Some(slot) => slot.1 = *v,
            None => {
                let known: Vec<&str> = p.iter().map(|(k, _)| *k).collect();
                return Err(CliError::Usage(format!("{id} has no parameter '{name}' (known: {})", known.join(", "))));
            }
        }
    }
    Ok(p)
}

pub fn build_geometry(id: &str, given: &[(String, f64)]) -> CliResult<Geometry<f64>> {
    let p = resolve_params(id, given)?;
    let v = |k: &str| p.iter().find(|(n, _)| *n == k).map(|(_, x)| *x).unwrap();
    Ok(match id {
        "round-s4" => round_s4(v("radius"))?.into(),
        "ellipsoid-s4" => EllipsoidS4::new(v("r"), v("l"), v("lt"))?.into(),
        "biaxial-s4" => deformed_geometry(&LinearDeformation::regular(v("c1"), v("c2"), v("epsilon")))?.into(),
        "page" => {
            let period = v("psi_period");
            if !(period > 0.0) {
                return Err(CliError::Usage(format!("psi_period must be positive, got {period}")));
            }
            let params = PageParams::new(PageParams::<f64>::standard().nu, v("lambda"))?;
            PageSpace::with_psi_period(params, period).into()
        }
        "s2xs2" => S2xS2::new(v("r1"), v("r2"))?.into(),
        _ => unreachable!(),
    })
}

/// Orders a named point by the chart's coordinate names.
pub fn chart_point(g: &Geometry<f64>, named: &[(String, f64)]) -> CliResult<[f64; 4]> {
    let chart = g.chart();
    let mut x = [f64::NAN; 4];
    for (name, v) in named {
        let k = chart.axis(name).ok_or_else(|| {
            CliError::Usage(format!(
                "{} has no coordinate '{name}' (coordinates: {})",
                g.id(),
                chart.coord_names.join(", ")
            ))
        })?;
        x[k] = *v;
    }
    if let Some(k) = (0..4).find(|&k| x[k].is_nan()) {
        return Err(CliError::Usage(format!("point is missing coordinate '{}'", chart.coord_names[k])));
    }
    chart.check_interior(&x)?;
    Ok(x)
}
