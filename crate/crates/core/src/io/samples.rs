use serde::{Deserialize, Serialize};

use super::parse_number;
use crate::error::{Error, Result};
use crate::sampler::{Exception, RunReport, SamplerSchedule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleFormat {
    Lines,
    Json,
}

impl std::str::FromStr for SampleFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lines" => Ok(SampleFormat::Lines),
            "json" => Ok(SampleFormat::Json),
            other => Err(Error::InvalidParameter(format!("unknown format {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub chain_seed: Option<u64>,
    pub giant_components: u64,
    pub rejection_overflows: u64,
    /// The output was drawn from the product distribution.
    pub final_exception: Exception,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct SampleMetadata {
    pub seed: u64,
    pub schedule: Option<SamplerSchedule>,
    pub scheme: Option<String>,
    pub giant_components: u64,
    pub rejection_overflows: u64,
    pub runs: Vec<RunSummary>,
    #[serde(default)]
    pub warnings: Vec<String>,
}

impl SampleMetadata {
    pub fn from_reports(
        seed: u64,
        schedule: Option<SamplerSchedule>,
        reports: &[RunReport],
    ) -> Self {
        Self {
            seed,
            schedule,
            scheme: None,
            giant_components: reports.iter().map(|r| r.giant_components).sum(),
            rejection_overflows: reports.iter().map(|r| r.rejection_overflows).sum(),
            runs: reports
                .iter()
                .map(|r| RunSummary {
                    chain_seed: r.chain_seed,
                    giant_components: r.giant_components,
                    rejection_overflows: r.rejection_overflows,
                    final_exception: r.final_exception,
                })
                .collect(),
            warnings: Vec::new(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct SampleDocument {
    samples: Vec<Vec<u64>>,
    metadata: SampleMetadata,
}

/// `lines`: one space-separated row per sample, metadata dropped. `json`: an
/// object with `samples` (array of arrays) and `metadata`.
pub fn emit_samples(
    samples: &[Vec<u64>],
    format: SampleFormat,
    metadata: &SampleMetadata,
) -> String {
    match format {
        SampleFormat::Lines => {
            let mut out = String::new();
            for row in samples {
                let cells: Vec<String> = row.iter().map(u64::to_string).collect();
                out.push_str(&cells.join(" "));
                out.push('\n');
            }
            out
        }
        SampleFormat::Json => {
            let doc = SampleDocument {
                samples: samples.to_vec(),
                metadata: metadata.clone(),
            };
            let mut out = serde_json::to_string_pretty(&doc).expect("sample document serializes");
            out.push('\n');
            out
        }
    }
}

pub fn parse_samples_lines(text: &str) -> Result<Vec<Vec<u64>>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            l.split_whitespace()
                .map(|t| parse_number(t, i + 1, "value"))
                .collect()
        })
        .collect()
}

pub fn parse_samples_json(text: &str) -> Result<(Vec<Vec<u64>>, SampleMetadata)> {
    let doc: SampleDocument = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    Ok((doc.samples, doc.metadata))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_sample_as_lines() {
        let out = emit_samples(
            &[vec![0, 1, 2]],
            SampleFormat::Lines,
            &SampleMetadata::default(),
        );
        assert_eq!(out, "0 1 2\n");
    }

    #[test]
    fn zero_samples() {
        let meta = SampleMetadata {
            seed: 11,
            ..Default::default()
        };
        assert_eq!(emit_samples(&[], SampleFormat::Lines, &meta), "");
        let json = emit_samples(&[], SampleFormat::Json, &meta);
        let (samples, back) = parse_samples_json(&json).unwrap();
        assert!(samples.is_empty());
        assert_eq!(back.seed, 11);
    }

    #[test]
    fn round_trip_three_samples() {
        let samples = vec![vec![1, 0, 3], vec![2, 2, 2], vec![0, 0, 0]];
        let meta = SampleMetadata {
            seed: 3,
            rejection_overflows: 2,
            ..Default::default()
        };
        let lines = emit_samples(&samples, SampleFormat::Lines, &meta);
        assert_eq!(parse_samples_lines(&lines).unwrap(), samples);
        let json = emit_samples(&samples, SampleFormat::Json, &meta);
        assert_eq!(parse_samples_json(&json).unwrap(), (samples, meta));
    }
}
