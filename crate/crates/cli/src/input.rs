//! State files, unitary files, parameter literals and family selection.

use std::path::Path;

use absfef::matcore::{c, ComplexMatrix};
use absfef::tripartite::{ghzw_marginal, three_qutrit_marginal};
use absfef::{construct, DensityMatrix, Family};
use clap::Args;
use serde::Deserialize;

use crate::error::{CliError, CliResult};

/// `{"dims": [a, b], "matrix": [[[re, im], ...], ...]}`, row-major.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dims: [usize; 2],
    pub matrix: Vec<Vec<[f64; 2]>>,
}

/// `{"matrix": [[[re, im], ...], ...]}`, row-major.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitaryFile {
    pub matrix: Vec<Vec<[f64; 2]>>,
}

fn read_to_string(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("cannot read {}: {e}", path.display())))
}

fn to_matrix(rows: &[Vec<[f64; 2]>], what: &str) -> CliResult<ComplexMatrix> {
    let n = rows.len();
    if n == 0 {
        return Err(CliError::parse(format!("{what}: matrix is empty")));
    }
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(CliError::parse(format!(
            "{what}: row {i} has {} entries, expected {n} (matrix must be square)",
            r.len()
        )));
    }
    if rows.iter().flatten().flatten().any(|x| !x.is_finite()) {
        return Err(CliError::parse(format!(
            "{what}: matrix has a non-finite entry"
        )));
    }
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        c(rows[i][j][0], rows[i][j][1])
    }))
}

pub fn parse_state(text: &str) -> CliResult<DensityMatrix> {
    let file: StateFile =
        serde_json::from_str(text).map_err(|e| CliError::parse(format!("state file: {e}")))?;
    let [a, b] = file.dims;
    if a == 0 || b == 0 {
        return Err(CliError::parse("state file: dims must be positive"));
    }
    let m = to_matrix(&file.matrix, "state file")?;
    if m.nrows() != a * b {
        return Err(CliError::parse(format!(
            "state file: dims {a}x{b} need a {n}x{n} matrix, got {r}x{r}",
            n = a * b,
            r = m.nrows()
        )));
    }
    DensityMatrix::new(m, a, b).map_err(|e| CliError::parse(format!("state file: {e}")))
}

pub fn read_state(path: &Path) -> CliResult<DensityMatrix> {
    parse_state(&read_to_string(path)?)
}

pub fn read_unitary(path: &Path) -> CliResult<ComplexMatrix> {
    let file: UnitaryFile = serde_json::from_str(&read_to_string(path)?)
        .map_err(|e| CliError::parse(format!("unitary file: {e}")))?;
    to_matrix(&file.matrix, "unitary file")
}

/// Decimal literal or exact ratio "p/q".
pub fn parse_real(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let value = match s.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p
                .trim()
                .parse()
                .map_err(|_| format!("bad numerator in {s:?}"))?;
            let q: f64 = q
                .trim()
                .parse()
                .map_err(|_| format!("bad denominator in {s:?}"))?;
            if q == 0.0 {
                return Err(format!("zero denominator in {s:?}"));
            }
            p / q
        }
        None => s
            .parse()
            .map_err(|_| format!("{s:?} is not a number or ratio p/q"))?,
    };
    if !value.is_finite() {
        return Err(format!("{s:?} is not finite"));
    }
    Ok(value)
}

/// Comma-separated list of reals or ratios.
pub fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',').map(parse_real).collect()
}

/// Family parameters shared by every command that builds a state.
#[derive(Debug, Clone, Default, Args)]
pub struct FamilyParams {
    /// Mixing weight q of x2 / y3.
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    pub q: Option<f64>,
    /// Isotropic weight beta.
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    /// Local dimension for isotropic / max_entangled.
    #[arg(long)]
    pub d: Option<usize>,
    /// GHZ weight p of the GHZ-W mixture.
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    pub p: Option<f64>,
    /// GHZ weight alpha of the three-qutrit family.
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Diagonal weights a,b,c,d of comp_diag.
    #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
    pub weights: Option<Vec<f64>>,
    /// Correlations t11,t22,t33 of bell_diag.
    #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
    pub t: Option<Vec<f64>>,
}

pub const FAMILIES: &[&str] = &[
    "x1",
    "x2",
    "y3",
    "isotropic",
    "iso2",
    "iso3",
    "comp_diag",
    "bell_diag",
    "ghz",
    "w",
    "af_not_as_example",
    "max_entangled",
    "ghzw",
    "three_qutrit",
];

/// Canonical family name: lowercase with underscores.
pub fn normalize_family(name: &str) -> CliResult<String> {
    let n = name.trim().to_ascii_lowercase().replace('-', "_");
    if FAMILIES.contains(&n.as_str()) {
        Ok(n)
    } else {
        Err(CliError::parse(format!(
            "unknown family {name:?}; expected one of {}",
            FAMILIES.join(", ")
        )))
    }
}

fn need<T: Copy>(v: Option<T>, flag: &str, family: &str) -> CliResult<T> {
    v.ok_or_else(|| CliError::parse(format!("family {family} needs --{flag}")))
}

fn fixed<const N: usize>(v: &Option<Vec<f64>>, flag: &str, family: &str) -> CliResult<[f64; N]> {
    let v = v
        .as_ref()
        .ok_or_else(|| CliError::parse(format!("family {family} needs --{flag}")))?;
    v.as_slice().try_into().map_err(|_| {
        CliError::parse(format!(
            "--{flag} takes {N} comma-separated values, got {}",
            v.len()
        ))
    })
}

/// Builds the state named `family`. `ghzw` and `three_qutrit` yield the
/// two-party marginal of the three-party state.
pub fn build_family(family: &str, params: &FamilyParams) -> CliResult<DensityMatrix> {
    let family = normalize_family(family)?;
    let f = family.as_str();
    let chosen = match f {
        "x1" => Family::X1,
        "x2" => Family::X2 {
            q: need(params.q, "q", f)?,
        },
        "y3" => Family::Y3 {
            q: need(params.q, "q", f)?,
        },
        "isotropic" => Family::Isotropic {
            d: params.d.unwrap_or(2),
            beta: need(params.beta, "beta", f)?,
        },
        "iso2" => Family::Isotropic {
            d: 2,
            beta: need(params.beta, "beta", f)?,
        },
        "iso3" => Family::Isotropic {
            d: 3,
            beta: need(params.beta, "beta", f)?,
        },
        "comp_diag" => Family::CompDiag {
            weights: fixed::<4>(&params.weights, "weights", f)?,
        },
        "bell_diag" => Family::BellDiag {
            t: fixed::<3>(&params.t, "t", f)?,
        },
        "ghz" => Family::Ghz,
        "w" => Family::W,
        "af_not_as_example" => Family::AfNotAsExample,
        "max_entangled" => Family::MaxEntangled {
            d: params.d.unwrap_or(2),
        },
        "ghzw" => return Ok(ghzw_marginal(need(params.p, "p", f)?)?.marginal),
        "three_qutrit" => {
            let alpha = need(params.alpha, "alpha", f)?;
            let beta = need(params.beta, "beta", f)?;
            return Ok(three_qutrit_marginal(alpha, beta)?.marginal);
        }
        _ => unreachable!("normalize_family admits only listed names"),
    };
    Ok(construct(&chosen)?)
}

/// Sets the named scan parameter.
pub fn set_param(params: &mut FamilyParams, name: &str, value: f64) -> CliResult<()> {
    match name {
        "q" => params.q = Some(value),
        "beta" => params.beta = Some(value),
        "p" => params.p = Some(value),
        "alpha" => params.alpha = Some(value),
        other => {
            return Err(CliError::parse(format!(
                "cannot scan parameter {other:?}; expected q, beta, p or alpha"
            )))
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_and_ratios() {
        assert_eq!(parse_real("0.25").unwrap(), 0.25);
        assert_eq!(parse_real("2/9").unwrap(), 2.0 / 9.0);
        assert_eq!(parse_real(" -1/3 ").unwrap(), -1.0 / 3.0);
        assert!(parse_real("1/0").is_err());
        assert!(parse_real("abc").is_err());
        assert!(parse_real("inf").is_err());
        assert_eq!(
            parse_list("1/2,3/10,1/5,0").unwrap(),
            vec![0.5, 0.3, 0.2, 0.0]
        );
    }

    #[test]
    fn state_file_round_trip() {
        let text = r#"{"dims": [2, 2], "matrix": [
            [[0.5, 0], [0, 0], [0, 0], [0.5, 0]],
            [[0, 0], [0, 0], [0, 0], [0, 0]],
            [[0, 0], [0, 0], [0, 0], [0, 0]],
            [[0.5, 0], [0, 0], [0, 0], [0.5, 0]]]}"#;
        let rho = parse_state(text).unwrap();
        assert_eq!((rho.dim_a(), rho.dim_b()), (2, 2));
        assert!((rho.spectrum().lambda_max() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn malformed_state_files() {
        assert!(parse_state("{").is_err());
        assert!(parse_state(r#"{"dims": [2, 2], "matrix": [[[1, 0]]]}"#).is_err());
        assert!(parse_state(r#"{"dims": [1, 1], "matrix": [[[1, 0], [0, 0]]]}"#).is_err());
        let e = parse_state(r#"{"dims": [1, 1], "matrix": [[[0.9, 0]]]}"#).unwrap_err();
        assert!(e.message.contains("trace"), "{}", e.message);
    }

    #[test]
    fn family_names() {
        assert_eq!(normalize_family("Comp-Diag").unwrap(), "comp_diag");
        assert!(normalize_family("nope").is_err());
        let p = FamilyParams {
            beta: Some(0.25),
            ..Default::default()
        };
        assert_eq!(build_family("iso3", &p).unwrap().dim_a(), 3);
        assert!(build_family("x2", &FamilyParams::default()).is_err());
    }
}
