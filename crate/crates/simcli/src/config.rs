//! `key = value` scenario files.
//!
//! ```text
//! # target and start
//! r0 = diag:-1,-1,1
//! r_init = scale:1.1,expmap:0,1,0,2.0943951023931953
//! omega_init = 0, 1, 1
//! k_e = 1
//! k_p = 4
//! k_d = 2
//! epsilon = auto
//! integrator = rk4
//! ```
//!
//! Keys not present keep the value of the base scenario. Blank lines and lines
//! starting with `#` are ignored. Unknown or repeated keys are errors.

use std::collections::HashSet;
use std::fmt;

use ambient_attitude::{max_epsilon, rodrigues_exp, Mat3d, Method, SimConfigd, Vec3d};
use thiserror::Error;

pub const KEYS: [&str; 13] = [
    "r0",
    "r_init",
    "omega_init",
    "k_e",
    "k_p",
    "k_d",
    "epsilon",
    "dt",
    "t_end",
    "integrator",
    "noise_rel",
    "seed",
    "record_every",
];

#[derive(Debug, Clone, PartialEq, Error)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub key: Option<String>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.line, &self.key) {
            (Some(l), Some(k)) => write!(f, "line {l}, key `{k}`: {}", self.message),
            (Some(l), None) => write!(f, "line {l}: {}", self.message),
            (None, Some(k)) => write!(f, "key `{k}`: {}", self.message),
            (None, None) => f.write_str(&self.message),
        }
    }
}

fn err(line: usize, key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError {
        line: Some(line),
        key: Some(key.to_string()),
        message: message.into(),
    }
}

/// Reals separated by commas and/or whitespace.
fn parse_reals(s: &str) -> Result<Vec<f64>, String> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            let x: f64 = t.parse().map_err(|_| format!("`{t}` is not a number"))?;
            if x.is_finite() {
                Ok(x)
            } else {
                Err(format!("`{t}` is not finite"))
            }
        })
        .collect()
}

fn parse_fixed<const N: usize>(s: &str) -> Result<[f64; N], String> {
    let v = parse_reals(s)?;
    v.as_slice()
        .try_into()
        .map_err(|_| format!("expected {N} numbers, found {}", v.len()))
}

fn parse_expmap(s: &str) -> Result<Mat3d, String> {
    let [ax, ay, az, theta] = parse_fixed::<4>(s)?;
    let axis = Vec3d::new(ax, ay, az);
    let n = axis.norm();
    if n == 0.0 {
        return Err("expmap axis must be non-zero".into());
    }
    rodrigues_exp(axis * (1.0 / n), theta).map_err(|e| e.to_string())
}

/// `diag:a,b,c` or nine reals in row-major order.
pub fn parse_matrix(s: &str) -> Result<Mat3d, String> {
    if let Some(rest) = s.strip_prefix("diag:") {
        let [a, b, c] = parse_fixed::<3>(rest)?;
        return Ok(Mat3d::diag(a, b, c));
    }
    Ok(Mat3d::from_row_major(parse_fixed::<9>(s)?))
}

/// `expmap:ax,ay,az,theta`, `scale:s,expmap:...`, or nine reals.
/// The axis is normalized.
pub fn parse_attitude(s: &str) -> Result<Mat3d, String> {
    if let Some(rest) = s.strip_prefix("expmap:") {
        return parse_expmap(rest);
    }
    if let Some(rest) = s.strip_prefix("scale:") {
        let (factor, inner) = rest
            .split_once(',')
            .ok_or_else(|| "expected `scale:s,expmap:ax,ay,az,theta`".to_string())?;
        let factor: f64 = factor.trim().parse().map_err(|_| format!("`{factor}` is not a number"))?;
        let inner = inner.trim();
        let m = inner
            .strip_prefix("expmap:")
            .ok_or_else(|| "scale: must be followed by expmap:".to_string())
            .and_then(parse_expmap)?;
        return Ok(m * factor);
    }
    Ok(Mat3d::from_row_major(parse_fixed::<9>(s)?))
}

fn parse_scalar(s: &str) -> Result<f64, String> {
    let [x] = parse_fixed::<1>(s)?;
    Ok(x)
}

/// Parses `text` on top of `base`. `epsilon = auto` (or an unset epsilon when
/// any of `k_p`, `k_d` changed) resolves to `0.99·max_epsilon(k_p, k_d)`.
pub fn parse_config(text: &str, base: &SimConfigd) -> Result<SimConfigd, ConfigError> {
    let mut cfg = *base;
    let mut seen = HashSet::new();
    let mut auto_epsilon = false;
    let mut explicit_epsilon = false;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (key, value) = trimmed.split_once('=').ok_or_else(|| ConfigError {
            line: Some(line),
            key: None,
            message: format!("expected `key = value`, found `{trimmed}`"),
        })?;
        let key = key.trim();
        let value = value.trim();
        if !KEYS.contains(&key) {
            return Err(err(line, key, "unknown key"));
        }
        if !seen.insert(key) {
            return Err(err(line, key, "key given more than once"));
        }
        let fail = |m: String| err(line, key, m);
        match key {
            "r0" => cfg.r0 = parse_matrix(value).map_err(fail)?,
            "r_init" => cfg.r_init = parse_attitude(value).map_err(fail)?,
            "omega_init" => cfg.omega_init = Vec3d::from_array(parse_fixed::<3>(value).map_err(fail)?),
            "k_e" => cfg.gains.k_e = parse_scalar(value).map_err(fail)?,
            "k_p" => cfg.gains.k_p = parse_scalar(value).map_err(fail)?,
            "k_d" => cfg.gains.k_d = parse_scalar(value).map_err(fail)?,
            "epsilon" => {
                explicit_epsilon = true;
                if value == "auto" {
                    auto_epsilon = true;
                } else {
                    cfg.gains.epsilon = parse_scalar(value).map_err(fail)?;
                }
            }
            "dt" => cfg.dt = parse_scalar(value).map_err(fail)?,
            "t_end" => cfg.t_end = parse_scalar(value).map_err(fail)?,
            "integrator" => cfg.method = value.parse::<Method>().map_err(fail)?,
            "noise_rel" => cfg.noise_rel = parse_scalar(value).map_err(fail)?,
            "seed" => cfg.seed = value.parse().map_err(|_| fail(format!("`{value}` is not an unsigned integer")))?,
            "record_every" => {
                cfg.record_every = value
                    .parse()
                    .map_err(|_| fail(format!("`{value}` is not a positive integer")))?
            }
            _ => unreachable!("key list and match arms agree"),
        }
    }

    let gains_changed = seen.contains("k_p") || seen.contains("k_d");
    if auto_epsilon || (gains_changed && !explicit_epsilon) {
        cfg.gains.epsilon = 0.99
            * max_epsilon(cfg.gains.k_p, cfg.gains.k_d).map_err(|e| ConfigError {
                line: None,
                key: Some("epsilon".into()),
                message: e.to_string(),
            })?;
    }
    cfg.validate().map_err(|e| ConfigError {
        line: None,
        key: None,
        message: e.to_string(),
    })?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ambient_attitude::scenarios;

    fn ideal() -> SimConfigd {
        scenarios::ideal()
    }

    #[test]
    fn empty_config_is_base() {
        assert_eq!(parse_config("", &ideal()).unwrap(), ideal());
        assert_eq!(parse_config("# just a comment\n\n", &ideal()).unwrap(), ideal());
    }

    #[test]
    fn full_off_manifold_config() {
        let text = "\
r0 = diag:-1,-1,1
r_init = scale:1.1,expmap:0,1,0,2.0943951023931953
omega_init = 0, 1, 1
k_e = 1
k_p = 4
k_d = 2
epsilon = auto
dt = 0.001
t_end = 20
integrator = rk4
noise_rel = 1e-3
seed = 0
record_every = 10
";
        let cfg = parse_config(text, &ideal()).unwrap();
        let expect = scenarios::off_manifold::<f64>();
        assert!((cfg.r_init - expect.r_init).norm() < 1e-15);
        assert_eq!(cfg.r0, expect.r0);
        assert_eq!(cfg.gains, expect.gains);
        assert_eq!((cfg.dt, cfg.t_end, cfg.noise_rel, cfg.record_every), (1e-3, 20.0, 1e-3, 10));
    }

    #[test]
    fn matrix_forms() {
        let m = parse_matrix("1 0 0, 0 1 0, 0 0 1").unwrap();
        assert_eq!(m, Mat3d::identity());
        let r = parse_attitude("expmap:0,2,0,1.5").unwrap();
        assert!((r - rodrigues_exp(Vec3d::basis(1), 1.5).unwrap()).norm() < 1e-15);
        assert!(parse_attitude("scale:2,diag:1,1,1").is_err());
        assert!(parse_attitude("expmap:0,0,0,1").is_err());
        assert!(parse_matrix("1,2,3").is_err());
    }

    #[test]
    fn changing_gains_recomputes_auto_epsilon() {
        let cfg = parse_config("k_p = 1\nk_d = 1", &ideal()).unwrap();
        assert!((cfg.gains.epsilon - 0.792).abs() < 1e-12);
        let cfg = parse_config("k_p = 1\nk_d = 1\nepsilon = 0.5", &ideal()).unwrap();
        assert_eq!(cfg.gains.epsilon, 0.5);
    }

    #[test]
    fn errors_name_line_and_key() {
        let e = parse_config("dt = 0.01\nfoo = 1", &ideal()).unwrap_err();
        assert_eq!((e.line, e.key.as_deref()), (Some(2), Some("foo")));
        assert!(e.to_string().contains("line 2"));

        let e = parse_config("dt = abc", &ideal()).unwrap_err();
        assert_eq!(e.key.as_deref(), Some("dt"));

        let e = parse_config("dt = 1\ndt = 2", &ideal()).unwrap_err();
        assert!(e.message.contains("more than once"));

        let e = parse_config("no equals sign", &ideal()).unwrap_err();
        assert_eq!(e.line, Some(1));

        let e = parse_config("integrator = midpoint", &ideal()).unwrap_err();
        assert!(e.message.contains("midpoint"));

        let e = parse_config("epsilon = 1.6", &ideal()).unwrap_err();
        assert!(e.message.contains("epsilon"));

        let e = parse_config("r0 = diag:1,1,2", &ideal()).unwrap_err();
        assert!(e.message.contains("rotation"));
    }
}
