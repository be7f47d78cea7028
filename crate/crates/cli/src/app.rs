//! Command-line plumbing: error-to-exit-code mapping, layered settings
//! (flags over config file over preset), and the mode-ratio resolution
//! rule.

use std::collections::BTreeMap;
use std::path::Path;

use crate::expr;

/// Failure with its process exit code. 2 is bad input, 3 a domain
/// error, 4 a numerical one.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub msg: String,
}

impl CliError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        CliError {
            code: 2,
            msg: msg.into(),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.msg)
    }
}

/// Exit code class for a library error: precondition violations are
/// input problems, parity/orthogonality/degeneracy are domain limits,
/// vanishing norms and non-convergent quadrature are numerical.
pub fn severity(e: &spinslab::Error) -> u8 {
    use spinslab::Error::*;
    match e {
        InvalidInput(_) => 2,
        ParityMismatch { .. } | OrthogonalEndpoints { .. } | DegenerateNormalization => 3,
        VanishingNorm { .. } | QuadratureNonConvergence { .. } => 4,
    }
}

impl From<spinslab::Error> for CliError {
    fn from(e: spinslab::Error) -> Self {
        CliError {
            code: severity(&e),
            msg: e.to_string(),
        }
    }
}

/// Every key accepted on the command line, in a config file, or from a
/// preset. Config files are validated against this list.
pub const KNOWN_KEYS: &[&str] = &[
    "epsilon",
    "kl",
    "kminus-l",
    "theta",
    "phi",
    "n-plus",
    "n-minus",
    "q",
    "grid",
    "tol",
    "format",
    "out",
    "preset",
    "mesh",
    "samples",
    "region",
    "include-trivial",
    "speed",
    "field",
    "moment",
    "length",
    "evaluator",
    "var",
];

fn preset_pairs(name: &str) -> Option<&'static [(&'static str, &'static str)]> {
    match name {
        // resonant-gp: one curve of the per-turn family, ratio 10
        "fig2" => Some(&[
            ("q", "10"),
            ("grid", "0:pi:361"),
            ("phi", "0"),
            ("tol", "1e-10"),
        ]),
        // prebarrier-gp: barrier-strength sweep at the transparency
        // thickness, equal channel weights
        "fig3" => Some(&[
            ("kl", "sqrt(10)*pi"),
            ("grid", "0.01:0.99:99"),
            ("theta", "pi/2"),
            ("phi", "0"),
            ("tol", "1e-10"),
        ]),
        // trajectory: decaying interior polarization, spin (sqrt(3)/2, 1/2)
        "fig4" => Some(&[
            ("epsilon", "2"),
            ("kminus-l", "5*pi"),
            ("theta", "pi/3"),
            ("phi", "0"),
            ("samples", "501"),
            ("region", "interior"),
        ]),
        // tunnel-gp: angle sweep at fixed decay depth
        "fig5" => Some(&[
            ("epsilon", "1.01"),
            ("kminus-l", "pi"),
            ("grid", "0:pi:361"),
            ("phi", "0"),
            ("tol", "1e-10"),
            ("mesh", "10000"),
        ]),
        _ => None,
    }
}

fn parse_config_file(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::invalid(format!("cannot read config {}: {e}", path.display())))?;
    let mut map = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::invalid(format!(
                "config line {} is not key=value: {line:?}",
                lineno + 1
            ))
        })?;
        let key = key.trim();
        if !KNOWN_KEYS.contains(&key) {
            return Err(CliError::invalid(format!(
                "config line {}: unknown key {key:?}",
                lineno + 1
            )));
        }
        map.insert(key.to_string(), value.trim().to_string());
    }
    Ok(map)
}

/// Merged view of preset, config file, and explicit flags, with flags
/// strongest.
pub struct Settings {
    map: BTreeMap<String, String>,
}

impl Settings {
    pub fn build(
        flags: Vec<(&'static str, Option<String>)>,
        config: Option<&Path>,
    ) -> Result<Self, CliError> {
        let file = match config {
            Some(path) => parse_config_file(path)?,
            None => BTreeMap::new(),
        };
        // preset name itself obeys the precedence: flag beats config
        let preset_name = flags
            .iter()
            .find(|(k, _)| *k == "preset")
            .and_then(|(_, v)| v.clone())
            .or_else(|| file.get("preset").cloned());

        let mut map = BTreeMap::new();
        if let Some(name) = &preset_name {
            let pairs = preset_pairs(name).ok_or_else(|| {
                CliError::invalid(format!(
                    "unknown preset {name:?} (expected fig2, fig3, fig4, or fig5)"
                ))
            })?;
            for (k, v) in pairs {
                map.insert(k.to_string(), v.to_string());
            }
            map.insert("preset".to_string(), name.clone());
        }
        for (k, v) in file {
            map.insert(k, v);
        }
        for (k, v) in flags {
            if let Some(v) = v {
                map.insert(k.to_string(), v);
            }
        }
        Ok(Settings { map })
    }

    #[cfg(test)]
    pub fn from_pairs(pairs: &[(&str, &str)]) -> Self {
        Settings {
            map: pairs
                .iter()
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect(),
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(|s| s.as_str())
    }

    pub fn f64(&self, key: &str) -> Result<Option<f64>, CliError> {
        match self.get(key) {
            None => Ok(None),
            Some(raw) => expr::eval(raw)
                .map(Some)
                .map_err(|e| CliError::invalid(format!("--{key}: {e}"))),
        }
    }

    pub fn req_f64(&self, key: &str) -> Result<f64, CliError> {
        self.f64(key)?
            .ok_or_else(|| CliError::invalid(format!("missing required value --{key}")))
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64, CliError> {
        Ok(self.f64(key)?.unwrap_or(default))
    }

    pub fn u32(&self, key: &str) -> Result<Option<u32>, CliError> {
        match self.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse::<u32>()
                .map(Some)
                .map_err(|_| CliError::invalid(format!("--{key}: expected an integer, got {raw:?}"))),
        }
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize, CliError> {
        match self.get(key) {
            None => Ok(default),
            Some(raw) => raw
                .parse::<usize>()
                .map_err(|_| CliError::invalid(format!("--{key}: expected an integer, got {raw:?}"))),
        }
    }

    pub fn flag(&self, key: &str) -> bool {
        matches!(self.get(key), Some("true") | Some("1"))
    }

    /// Inclusive uniform grid from a `start:stop:steps` value; start
    /// and stop may be expressions, steps is the point count.
    pub fn grid(&self, key: &str) -> Result<Option<Vec<f64>>, CliError> {
        let Some(raw) = self.get(key) else {
            return Ok(None);
        };
        let parts: Vec<&str> = raw.split(':').collect();
        if parts.len() != 3 {
            return Err(CliError::invalid(format!(
                "--{key}: expected start:stop:steps, got {raw:?}"
            )));
        }
        let bad = |e: String| CliError::invalid(format!("--{key}: {e}"));
        let start = expr::eval(parts[0]).map_err(bad)?;
        let stop = expr::eval(parts[1]).map_err(bad)?;
        let steps: usize = parts[2]
            .parse()
            .map_err(|_| CliError::invalid(format!("--{key}: bad step count {:?}", parts[2])))?;
        if steps == 0 {
            return Err(CliError::invalid(format!("--{key}: step count must be >= 1")));
        }
        if steps == 1 {
            if start != stop {
                return Err(CliError::invalid(format!(
                    "--{key}: a single-point grid needs start == stop"
                )));
            }
            return Ok(Some(vec![start]));
        }
        let h = (stop - start) / (steps - 1) as f64;
        Ok(Some((0..steps).map(|j| start + h * j as f64).collect()))
    }
}

/// Mode counts chosen for a requested channel ratio, with a
/// human-readable trace of the choice.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioChoice {
    pub n_plus: u32,
    pub n_minus: u32,
    pub note: String,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Picks the smallest valid mode-count pair for a ratio given as text.
///
/// A plain decimal is treated as the exact rational a/b in lowest
/// terms: (b, a) when the parity matches, (2b, 2a) otherwise. Anything
/// else is evaluated numerically and matched by the smallest
/// equal-parity pair within 1e-6 of the ratio; if the cap is hit the
/// nearest achievable pair is reported instead.
pub fn resolve_ratio(raw: &str) -> Result<RatioChoice, CliError> {
    let raw = raw.trim();
    if expr::is_plain_decimal(raw) {
        let (int_part, frac_part) = match raw.split_once('.') {
            Some((i, f)) => (i, f),
            None => (raw, ""),
        };
        if int_part.len() + frac_part.len() > 15 {
            return Err(CliError::invalid(format!("--q: literal {raw:?} has too many digits")));
        }
        let digits: String = [int_part, frac_part].concat();
        let num: u64 = digits
            .parse()
            .map_err(|_| CliError::invalid(format!("--q: bad literal {raw:?}")))?;
        let den: u64 = 10u64.pow(frac_part.len() as u32);
        if num <= den {
            return Err(CliError::invalid(format!("--q must be > 1, got {raw}")));
        }
        let g = gcd(num, den);
        let (a, b) = (num / g, den / g);
        let (n_plus, n_minus) = if (a % 2) == (b % 2) {
            (b, a)
        } else {
            (2 * b, 2 * a)
        };
        if n_minus > u32::MAX as u64 {
            return Err(CliError::invalid(format!("--q: {raw} needs mode counts beyond range")));
        }
        return Ok(RatioChoice {
            n_plus: n_plus as u32,
            n_minus: n_minus as u32,
            note: format!("q={raw} resolved exactly to (n_plus, n_minus) = ({n_plus}, {n_minus})"),
        });
    }

    let q = expr::eval(raw).map_err(|e| CliError::invalid(format!("--q: {e}")))?;
    if !q.is_finite() || q <= 1.0 {
        return Err(CliError::invalid(format!("--q must be finite and > 1, got {q}")));
    }
    const CAP: u32 = 10_000;
    let mut best: Option<(f64, u32, u32)> = None;
    for n_plus in 1..=CAP {
        let ideal = q * n_plus as f64;
        let rounded = ideal.round() as i64;
        // candidates of matching parity around the unconstrained best
        let cands = [rounded - 1, rounded, rounded + 1];
        for c in cands {
            if c <= n_plus as i64 || (c as u64 % 2) != (n_plus as u64 % 2) {
                continue;
            }
            let n_minus = c as u32;
            let err = (n_minus as f64 / n_plus as f64 - q).abs();
            if best.map_or(true, |(b, _, _)| err < b) {
                best = Some((err, n_plus, n_minus));
            }
        }
        if let Some((err, np, nm)) = best {
            if err < 1e-6 {
                return Ok(RatioChoice {
                    n_plus: np,
                    n_minus: nm,
                    note: format!(
                        "q={raw} matched by (n_plus, n_minus) = ({np}, {nm}) within 1e-6"
                    ),
                });
            }
        }
    }
    let (err, np, nm) =
        best.ok_or_else(|| CliError::invalid(format!("--q: no valid mode pair for {raw}")))?;
    Ok(RatioChoice {
        n_plus: np,
        n_minus: nm,
        note: format!(
            "q={raw} has no equal-parity pair within 1e-6 under n_plus <= {CAP}; nearest is ({np}, {nm}), off by {err:.3e}"
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_rational_path() {
        let c = resolve_ratio("10").unwrap();
        assert_eq!((c.n_plus, c.n_minus), (2, 20));
        let c = resolve_ratio("3").unwrap();
        assert_eq!((c.n_plus, c.n_minus), (1, 3));
        let c = resolve_ratio("1.2").unwrap();
        assert_eq!((c.n_plus, c.n_minus), (10, 12));
        let c = resolve_ratio("1.002").unwrap();
        assert_eq!((c.n_plus, c.n_minus), (1000, 1002));
    }

    #[test]
    fn ratio_float_path() {
        let c = resolve_ratio("6/5").unwrap();
        assert_eq!((c.n_plus, c.n_minus), (10, 12));
        let c = resolve_ratio("sqrt(9)").unwrap();
        assert_eq!((c.n_plus, c.n_minus), (1, 3));
        // irrational ratio: no exact pair, nearest reported
        let c = resolve_ratio("sqrt(2)").unwrap();
        assert!(c.n_minus as f64 / c.n_plus as f64 - std::f64::consts::SQRT_2 < 1e-6);
    }

    #[test]
    fn ratio_rejects_non_ratios() {
        assert!(resolve_ratio("1").is_err());
        assert!(resolve_ratio("0.5").is_err());
        assert!(resolve_ratio("frog").is_err());
    }

    #[test]
    fn settings_precedence() {
        // flag beats config-free preset value
        let s = Settings::build(
            vec![
                ("preset", Some("fig2".to_string())),
                ("q", Some("3".to_string())),
                ("theta", None),
            ],
            None,
        )
        .unwrap();
        assert_eq!(s.get("q"), Some("3"));
        assert_eq!(s.get("grid"), Some("0:pi:361"));
        assert_eq!(s.get("theta"), None);
    }

    #[test]
    fn grid_parsing() {
        let s = Settings::from_pairs(&[("grid", "0:pi:3")]);
        let g = s.grid("grid").unwrap().unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!(g[0], 0.0);
        assert!((g[1] - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert_eq!(g[2], std::f64::consts::PI);

        let s = Settings::from_pairs(&[("grid", "1:1:1")]);
        assert_eq!(s.grid("grid").unwrap().unwrap(), vec![1.0]);

        let s = Settings::from_pairs(&[("grid", "0:1:0")]);
        assert!(s.grid("grid").is_err());
        let s = Settings::from_pairs(&[("grid", "0:1")]);
        assert!(s.grid("grid").is_err());
    }
}
