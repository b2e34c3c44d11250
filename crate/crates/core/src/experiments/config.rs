//! Scenario configuration: flat `key = value` lines, `#` starts a comment.
//!
//! ```text
//! domain   = 0,3.141592653589793,0,3.141592653589793,0,3.141592653589793
//! n        = 2,3
//! degree   = 2
//! refine   = wf
//! num_eigs = 13
//! zero_tol = 1e-8
//! bc       = tangential
//! solver   = dense
//! ```

use std::path::Path;

use crate::error::{Error, Result};
use crate::mesh::Aabb;

use super::{RefineMode, Scenario};

pub fn parse_list<T: std::str::FromStr>(s: &str) -> std::result::Result<Vec<T>, String>
where
    T::Err: std::fmt::Display,
{
    s.split(',')
        .map(|t| t.trim())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<T>().map_err(|e| format!("bad value `{t}`: {e}")))
        .collect()
}

pub fn parse_domain(s: &str) -> std::result::Result<Aabb, String> {
    let v: Vec<f64> = parse_list(s)?;
    let b: [f64; 6] = v
        .try_into()
        .map_err(|_| "domain needs 6 values x0,x1,y0,y1,z0,z1".to_string())?;
    Aabb::from_bounds(b).map_err(|e| e.to_string())
}

/// Applies one `key = value` setting to `sc`.
pub fn apply_setting(sc: &mut Scenario, key: &str, value: &str) -> std::result::Result<(), String> {
    let num = |v: &str| -> std::result::Result<usize, String> {
        v.parse().map_err(|e| format!("bad integer `{v}`: {e}"))
    };
    match key {
        "domain" => sc.domain = parse_domain(value)?,
        "n" => sc.n_list = parse_list(value)?,
        "degree" => sc.degree = num(value)?,
        "refine" => sc.refine = value.parse::<RefineMode>().map_err(|e| e.to_string())?,
        "num_eigs" => sc.num_eigs = num(value)?,
        "zero_tol" => {
            sc.zero_tol = value
                .parse()
                .map_err(|e| format!("bad number `{value}`: {e}"))?
        }
        "bc" => sc.bc = value.parse().map_err(|e: Error| e.to_string())?,
        "dense_cap" => sc.dense_cap = num(value)?,
        "solver" => sc.solver = value.parse().map_err(|e: Error| e.to_string())?,
        _ => return Err(format!("unknown key `{key}`")),
    }
    Ok(())
}

pub fn parse_scenario(text: &str, source_name: &str) -> Result<Scenario> {
    let mut sc = Scenario::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let perr = |message: String| Error::Parse {
            source_name: source_name.to_string(),
            line: i + 1,
            message,
        };
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| perr("expected `key = value`".into()))?;
        apply_setting(&mut sc, key.trim(), value.trim()).map_err(perr)?;
    }
    Ok(sc)
}

pub fn read_scenario(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_scenario(&text, &path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hcurl_bc::BcMode;

    #[test]
    fn parses_all_keys() {
        let sc = parse_scenario(
            "# comment\ndomain = 0,1,0,2,0,3\nn = 2, 3\ndegree = 2 # trailing\nrefine = wf\n\
             num_eigs = 5\nzero_tol = 1e-9\nbc = none\ndense_cap = 100\nsolver = shift-invert\n",
            "t",
        )
        .unwrap();
        assert_eq!(sc.domain.bounds(), [0.0, 1.0, 0.0, 2.0, 0.0, 3.0]);
        assert_eq!(sc.n_list, vec![2, 3]);
        assert_eq!(sc.degree, 2);
        assert_eq!(sc.refine, RefineMode::WorseyFarin);
        assert_eq!(sc.num_eigs, 5);
        assert_eq!(sc.zero_tol, 1e-9);
        assert_eq!(sc.bc, BcMode::None);
        assert_eq!(sc.dense_cap, 100);
        assert_eq!(sc.solver, super::super::SolverKind::ShiftInvert);
    }

    #[test]
    fn reports_bad_lines() {
        let err = parse_scenario("n = 2\ncolour = blue\n", "cfg").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(parse_scenario("degree two\n", "cfg").is_err());
        assert!(parse_scenario("domain = 0,1,0,1\n", "cfg").is_err());
    }
}
