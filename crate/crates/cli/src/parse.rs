//! Parsing of schedule, instance and vector arguments.

use std::path::Path;

use rppa_core::prox::ProxInstance;
use rppa_core::schedule::Schedule;
use rppa_core::Vector;

use crate::CliError;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn parse_f64(name: &str, text: &str) -> Result<f64, CliError> {
    let v: f64 = text
        .trim()
        .parse()
        .map_err(|_| usage(format!("`{name}` must be a number, got `{text}`")))?;
    if !v.is_finite() {
        return Err(usage(format!("`{name}` must be finite, got `{text}`")));
    }
    Ok(v)
}

fn parse_count<T: std::str::FromStr>(name: &str, text: &str) -> Result<T, CliError> {
    text.trim()
        .parse()
        .map_err(|_| usage(format!("`{name}` must be a nonnegative integer, got `{text}`")))
}

/// Comma-separated coordinates such as `1,0,0`.
pub fn parse_vector(text: &str) -> Result<Vector, CliError> {
    let coords = text
        .split(',')
        .map(|t| parse_f64("x0", t))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Vector::new(coords)?)
}

/// A schedule from its kind name and positional parameters:
/// `constant <alpha> <N>`, `tv <N>`, `silver|right_silver|left_silver <m>`
/// or `explicit <a1> [<a2> ...]`.
pub fn parse_schedule(kind: &str, params: &[String]) -> Result<Schedule, CliError> {
    let expect = |n: usize, shape: &str| -> Result<(), CliError> {
        if params.len() == n {
            Ok(())
        } else {
            Err(usage(format!(
                "schedule `{kind}` takes {shape}, got {} parameter(s)",
                params.len()
            )))
        }
    };
    let schedule = match kind {
        "constant" => {
            expect(2, "<alpha> <N>")?;
            Schedule::constant(parse_f64("alpha", &params[0])?, parse_count("N", &params[1])?)?
        }
        "tv" => {
            expect(1, "<N>")?;
            Schedule::tv(parse_count("N", &params[0])?)?
        }
        "silver" | "right_silver" | "left_silver" => {
            expect(1, "<m>")?;
            let m: u32 = parse_count("m", &params[0])?;
            match kind {
                "silver" => Schedule::silver(m)?,
                "right_silver" => Schedule::right_silver(m)?,
                _ => Schedule::left_silver(m)?,
            }
        }
        "explicit" => {
            let steps = params
                .iter()
                .flat_map(|p| p.split(','))
                .map(|t| parse_f64("alpha", t))
                .collect::<Result<Vec<_>, _>>()?;
            Schedule::explicit(steps)?
        }
        other => {
            return Err(usage(format!(
                "unknown schedule kind `{other}`; expected constant, tv, silver, right_silver, left_silver or explicit"
            )))
        }
    };
    Ok(schedule)
}

/// Key/value parameters of a catalog spec.
struct Params<'a> {
    name: &'a str,
    pairs: Vec<(&'a str, &'a str)>,
    dim: usize,
}

impl<'a> Params<'a> {
    fn parse(name: &'a str, text: Option<&'a str>, dim: usize) -> Result<Self, CliError> {
        let mut pairs = Vec::new();
        for item in text.unwrap_or("").split(',').filter(|s| !s.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| usage(format!("instance parameter `{item}` is not of the form key=value")))?;
            pairs.push((k.trim(), v.trim()));
        }
        Ok(Params { name, pairs, dim })
    }

    fn check_keys(&self, allowed: &[&str]) -> Result<(), CliError> {
        for (k, _) in &self.pairs {
            if !allowed.contains(k) {
                return Err(usage(format!(
                    "unknown parameter `{k}` for instance `{}`; expected {}",
                    self.name,
                    allowed.join(", ")
                )));
            }
        }
        Ok(())
    }

    fn raw(&self, key: &str) -> Option<&'a str> {
        self.pairs.iter().rev().find(|(k, _)| *k == key).map(|(_, v)| *v)
    }

    fn scalar(&self, key: &str, default: f64) -> Result<f64, CliError> {
        self.raw(key).map_or(Ok(default), |v| parse_f64(key, v))
    }

    /// A `;`-separated list of `dim` values, or one value broadcast to `dim`.
    fn vector(&self, key: &str, default: f64) -> Result<Vector, CliError> {
        let Some(text) = self.raw(key) else {
            return Ok(Vector::filled(self.dim, default));
        };
        let values = text
            .split(';')
            .map(|t| parse_f64(key, t))
            .collect::<Result<Vec<_>, _>>()?;
        let v = if values.len() == 1 {
            Vector::filled(self.dim, values[0])
        } else {
            Vector::new(values)?
        };
        v.check_dim(self.dim)?;
        Ok(v)
    }
}

/// An instance from a JSON file path or a catalog spec `name[:key=value,...]`.
///
/// Catalog names are `scaled_norm` (eta), `huber` (eta, L), `l1` (w),
/// `quadratic` (q, b) and `box_indicator` (lo, hi). Vector parameters take
/// one value broadcast to `dim` or a `;`-separated list.
pub fn parse_instance(spec: &str, dim: usize) -> Result<ProxInstance, CliError> {
    if spec.ends_with(".json") || Path::new(spec).is_file() {
        let text = std::fs::read_to_string(spec).map_err(|source| CliError::Input {
            path: spec.to_string(),
            source,
        })?;
        return Ok(ProxInstance::from_json(&text)?);
    }
    let (name, rest) = match spec.split_once(':') {
        Some((n, r)) => (n, Some(r)),
        None => (spec, None),
    };
    let p = Params::parse(name, rest, dim)?;
    let inst = match name {
        "scaled_norm" => {
            p.check_keys(&["eta"])?;
            ProxInstance::scaled_norm(p.scalar("eta", 1.0)?, dim)?
        }
        "huber" => {
            p.check_keys(&["eta", "L"])?;
            ProxInstance::huber(p.scalar("eta", 1.0)?, p.scalar("L", 1.0)?, dim)?
        }
        "l1" => {
            p.check_keys(&["w"])?;
            ProxInstance::l1(p.scalar("w", 1.0)?, dim)?
        }
        "quadratic" => {
            p.check_keys(&["q", "b"])?;
            ProxInstance::quadratic(p.vector("q", 1.0)?, p.vector("b", 0.0)?)?
        }
        "box_indicator" => {
            p.check_keys(&["lo", "hi"])?;
            ProxInstance::box_indicator(p.vector("lo", -1.0)?, p.vector("hi", 1.0)?)?
        }
        other => {
            return Err(usage(format!(
                "unknown instance `{other}`; expected scaled_norm, huber, l1, quadratic, box_indicator or a .json path"
            )))
        }
    };
    Ok(inst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rppa_core::prox::ProxKind;

    fn args(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn schedules_parse() {
        assert_eq!(parse_schedule("constant", &args(&["1.5", "4"])).unwrap().len(), 4);
        assert_eq!(parse_schedule("silver", &args(&["3"])).unwrap().len(), 7);
        assert_eq!(
            parse_schedule("explicit", &args(&["1,2", "0.5"])).unwrap().steps(),
            &[1.0, 2.0, 0.5]
        );
    }

    #[test]
    fn schedule_errors_are_usage() {
        for (kind, params) in [
            ("tv", vec![]),
            ("silver", vec!["x"]),
            ("bogus", vec!["1"]),
            ("constant", vec!["nan", "3"]),
        ] {
            let err = parse_schedule(kind, &args(&params)).unwrap_err();
            assert_eq!(err.exit_code(), 2, "{kind}: {err}");
        }
    }

    #[test]
    fn catalog_specs() {
        let h = parse_instance("huber:eta=2,L=3", 2).unwrap();
        assert_eq!(
            h.kind(),
            &ProxKind::Huber {
                eta: 2.0,
                lipschitz: 3.0
            }
        );
        let q = parse_instance("quadratic:q=1;2;3,b=0.5", 3).unwrap();
        assert_eq!(q.x_star().as_slice(), &[0.5, 0.5, 0.5]);
        assert_eq!(parse_instance("scaled_norm", 4).unwrap().dim(), 4);
    }

    #[test]
    fn catalog_errors() {
        assert!(parse_instance("huber:rho=1", 2).is_err());
        assert!(parse_instance("quadratic:q=1;2", 3).is_err());
        assert!(parse_instance("l1:w", 2).is_err());
        assert!(parse_instance("missing.json", 2).is_err());
    }

    #[test]
    fn vectors() {
        assert_eq!(parse_vector("1, 0,-2").unwrap().as_slice(), &[1.0, 0.0, -2.0]);
        assert!(parse_vector("1,,2").is_err());
    }
}
