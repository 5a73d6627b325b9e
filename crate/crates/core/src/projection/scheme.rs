use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::CspFormula;

/// Balanced interval projection: variable `v`'s values `0..q_v` are cut into
/// `s_v` consecutive intervals, the first `q_v mod s_v` of which have length
/// `ceil(q_v/s_v)` and the rest `floor(q_v/s_v)`. Symbol `y` is the index of
/// the interval containing the value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectionScheme {
    domain_sizes: Vec<u64>,
    alphabet_sizes: Vec<u64>,
}

impl ProjectionScheme {
    pub fn new(domain_sizes: Vec<u64>, alphabet_sizes: Vec<u64>) -> Result<Self> {
        if domain_sizes.len() != alphabet_sizes.len() {
            return Err(Error::InvalidScheme(format!(
                "{} alphabet sizes for {} variables",
                alphabet_sizes.len(),
                domain_sizes.len()
            )));
        }
        for (v, (&q, &s)) in domain_sizes.iter().zip(&alphabet_sizes).enumerate() {
            if s == 0 || s > q {
                return Err(Error::InvalidScheme(format!(
                    "variable {v}: alphabet size {s} not in 1..={q}"
                )));
            }
        }
        Ok(Self {
            domain_sizes,
            alphabet_sizes,
        })
    }

    pub fn for_formula(formula: &CspFormula, alphabet_sizes: Vec<u64>) -> Result<Self> {
        Self::new(formula.domain_sizes().to_vec(), alphabet_sizes)
    }

    /// `s_v = q_v` everywhere.
    pub fn identity(formula: &CspFormula) -> Self {
        let q = formula.domain_sizes().to_vec();
        Self {
            alphabet_sizes: q.clone(),
            domain_sizes: q,
        }
    }

    /// `s_v = 1` everywhere.
    pub fn trivial(formula: &CspFormula) -> Self {
        Self {
            domain_sizes: formula.domain_sizes().to_vec(),
            alphabet_sizes: vec![1; formula.num_vars()],
        }
    }

    /// Marked variables keep their value, unmarked ones collapse to one symbol.
    pub fn from_marks(formula: &CspFormula, marked: &[bool]) -> Self {
        let domain_sizes = formula.domain_sizes().to_vec();
        let alphabet_sizes = domain_sizes
            .iter()
            .zip(marked)
            .map(|(&q, &m)| if m { q } else { 1 })
            .collect();
        Self {
            domain_sizes,
            alphabet_sizes,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.domain_sizes.len()
    }

    pub fn domain_sizes(&self) -> &[u64] {
        &self.domain_sizes
    }

    pub fn alphabet_sizes(&self) -> &[u64] {
        &self.alphabet_sizes
    }

    pub fn alphabet_size(&self, v: usize) -> u64 {
        self.alphabet_sizes[v]
    }

    pub fn domain_size(&self, v: usize) -> u64 {
        self.domain_sizes[v]
    }

    pub fn is_marked(&self, v: usize) -> bool {
        self.alphabet_sizes[v] == self.domain_sizes[v]
    }

    #[inline]
    fn layout(&self, v: usize) -> (u64, u64, u64) {
        let q = self.domain_sizes[v];
        let s = self.alphabet_sizes[v];
        // (short interval length, number of long intervals, long length)
        let short = q / s;
        let long_count = q % s;
        (short, long_count, short + 1)
    }

    /// `|h_v^{-1}(y)|`, without range checks.
    #[inline]
    pub fn preimage_len(&self, v: usize, y: u64) -> u64 {
        let (short, long_count, long) = self.layout(v);
        if y < long_count {
            long
        } else {
            short
        }
    }

    /// First value of the interval for `y`, without range checks.
    #[inline]
    pub fn preimage_start(&self, v: usize, y: u64) -> u64 {
        let (short, long_count, long) = self.layout(v);
        if y < long_count {
            y * long
        } else {
            long_count * long + (y - long_count) * short
        }
    }

    /// `h_v(x)`, without range checks.
    #[inline]
    pub fn project_unchecked(&self, v: usize, x: u64) -> u64 {
        let (short, long_count, long) = self.layout(v);
        let boundary = long_count * long;
        if x < boundary {
            x / long
        } else {
            long_count + (x - boundary) / short
        }
    }

    /// Uniform draw from `h_v^{-1}(y)`, without range checks.
    #[inline]
    pub fn invert_unchecked<R: Rng + ?Sized>(&self, v: usize, y: u64, rng: &mut R) -> u64 {
        let len = self.preimage_len(v, y);
        let start = self.preimage_start(v, y);
        if len == 1 {
            start
        } else {
            start + rng.gen_range(0..len)
        }
    }

    /// Projection oracle, evaluation query.
    pub fn evaluate(&self, v: usize, x: u64) -> Result<u64> {
        let q = self.domain_sizes[v];
        if x >= q {
            return Err(Error::ValueOutOfDomain {
                var: v,
                value: x,
                size: q,
            });
        }
        Ok(self.project_unchecked(v, x))
    }

    /// Projection oracle, inversion query: a uniform value of `h_v^{-1}(y)`.
    pub fn invert<R: Rng + ?Sized>(&self, v: usize, y: u64, rng: &mut R) -> Result<u64> {
        let s = self.alphabet_sizes[v];
        if y >= s {
            return Err(Error::SymbolOutOfAlphabet {
                var: v,
                symbol: y,
                size: s,
            });
        }
        Ok(self.invert_unchecked(v, y, rng))
    }

    /// `h(x)` for a full assignment.
    pub fn project_assignment(&self, x: &[u64]) -> Vec<u64> {
        x.iter()
            .enumerate()
            .map(|(v, &xv)| self.project_unchecked(v, xv))
            .collect()
    }

    /// `"s s_1 s_2 ... s_n"`.
    pub fn to_line(&self) -> String {
        let mut line = String::from("s");
        for s in &self.alphabet_sizes {
            line.push(' ');
            line.push_str(&s.to_string());
        }
        line
    }

    /// Parses the output of [`ProjectionScheme::to_line`]. Blank lines and
    /// lines starting with `#` are skipped.
    pub fn parse_line(text: &str, domain_sizes: &[u64]) -> Result<Self> {
        let mut found = None;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = |message: String| Error::Parse {
                line: i + 1,
                message,
            };
            if found.is_some() {
                return Err(parse_err("more than one scheme line".into()));
            }
            let mut tokens = line.split_whitespace();
            if tokens.next() != Some("s") {
                return Err(parse_err("scheme line must start with 's'".into()));
            }
            let sizes = tokens
                .map(|t| {
                    t.parse::<u64>()
                        .map_err(|e| parse_err(format!("bad alphabet size {t:?}: {e}")))
                })
                .collect::<Result<Vec<_>>>()?;
            found = Some(sizes);
        }
        let sizes = found.ok_or_else(|| Error::Parse {
            line: 0,
            message: "no scheme line".into(),
        })?;
        Self::new(domain_sizes.to_vec(), sizes)
    }
}

/// See [`ProjectionScheme::evaluate`].
pub fn evaluate_projection(scheme: &ProjectionScheme, v: usize, x: u64) -> Result<u64> {
    scheme.evaluate(v, x)
}

/// See [`ProjectionScheme::invert`].
pub fn invert_projection<R: Rng + ?Sized>(
    scheme: &ProjectionScheme,
    v: usize,
    y: u64,
    rng: &mut R,
) -> Result<u64> {
    scheme.invert(v, y, rng)
}
