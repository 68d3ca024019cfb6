use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub c: f64,
    pub sigma: Option<f64>,
}

impl Sample {
    pub fn weight(&self) -> f64 {
        self.sigma.map_or(1.0, |s| 1.0 / (s * s))
    }
}

/// A measured correlation decay C(t), times in ps.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationSamples {
    points: Vec<Sample>,
}

impl CorrelationSamples {
    pub fn new(points: Vec<Sample>) -> Result<Self> {
        for (i, p) in points.iter().enumerate() {
            if !p.t.is_finite() || !p.c.is_finite() {
                return Err(Error::InvalidData(format!("point {i}: non-finite value")));
            }
            if let Some(s) = p.sigma {
                if !(s > 0.0) || !s.is_finite() {
                    return Err(Error::InvalidData(format!(
                        "point {i}: sigma must be > 0, got {s}"
                    )));
                }
            }
        }
        if let Some(first) = points.first() {
            if first.t < 0.0 {
                return Err(Error::InvalidData(format!(
                    "first time must be >= 0, got {}",
                    first.t
                )));
            }
        }
        if let Some(i) = points.windows(2).position(|w| !(w[1].t > w[0].t)) {
            return Err(Error::InvalidData(format!(
                "times must be strictly increasing (point {} at t = {})",
                i + 1,
                points[i + 1].t
            )));
        }
        Ok(CorrelationSamples { points })
    }

    /// Builds unweighted samples from parallel slices.
    pub fn from_curve(t: &[f64], c: &[f64]) -> Result<Self> {
        if t.len() != c.len() {
            return Err(Error::InvalidData(format!(
                "{} times but {} values",
                t.len(),
                c.len()
            )));
        }
        Self::new(
            t.iter()
                .zip(c)
                .map(|(&t, &c)| Sample { t, c, sigma: None })
                .collect(),
        )
    }

    /// Reads `t_ps, C[, sigma]` rows separated by commas, tabs or spaces.
    /// Lines starting with `#` and blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut points = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.trim();
            if body.is_empty() || body.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = body
                .split(|ch: char| ch == ',' || ch == ';' || ch.is_whitespace())
                .filter(|f| !f.is_empty())
                .collect();
            if fields.len() < 2 || fields.len() > 3 {
                return Err(Error::Dataset {
                    line,
                    field: "row".into(),
                    reason: format!("expected 2 or 3 columns, found {}", fields.len()),
                });
            }
            let num = |i: usize, name: &str| -> Result<f64> {
                fields[i].parse::<f64>().map_err(|_| Error::Dataset {
                    line,
                    field: name.into(),
                    reason: format!("`{}` is not a number", fields[i]),
                })
            };
            let t = num(0, "t_ps")?;
            let c = num(1, "C")?;
            let sigma = if fields.len() == 3 {
                Some(num(2, "sigma")?)
            } else {
                None
            };
            points.push(Sample { t, c, sigma });
        }
        Self::new(points)
    }

    pub fn points(&self) -> &[Sample] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_mixed_delimiters_and_comments() {
        let s = CorrelationSamples::parse("# t C\n0, 1\n0.5\t0.6\n\n1.0 0.4 0.01\n").unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.points()[2].sigma, Some(0.01));
        assert_eq!(s.points()[2].weight(), 1e4);
    }

    #[test]
    fn reports_line_and_field() {
        match CorrelationSamples::parse("0,1\n1,abc\n").unwrap_err() {
            Error::Dataset { line, field, .. } => {
                assert_eq!(line, 2);
                assert_eq!(field, "C");
            }
            e => panic!("{e}"),
        }
        assert!(CorrelationSamples::parse("0,1,2,3\n").is_err());
    }

    #[test]
    fn rejects_unordered_times() {
        assert!(CorrelationSamples::from_curve(&[0.0, 1.0, 1.0], &[1.0, 0.5, 0.2]).is_err());
        assert!(CorrelationSamples::from_curve(&[-1.0, 1.0], &[1.0, 0.5]).is_err());
        assert!(CorrelationSamples::parse("0,1,-1\n").is_err());
    }
}
