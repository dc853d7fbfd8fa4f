//! Run configuration: presets, JSON config files and flag overrides.
//!
//! Resolution order is preset → config file → flags. The config file may be
//! partial; it is merged key by key into the preset before being parsed.

use std::path::{Path, PathBuf};

use murmur_core::characters::{DirichletCharacter, GeneratorAssignment};
use murmur_core::complexfn::{AfeParameters, QuadratureSpec};
use murmur_core::discriminants::{enumerate_family, DiscriminantFamily};
use murmur_core::lfunc::GL1Representation;
use murmur_core::murmur::RhsMode;
use murmur_core::Complex64;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

/// `{"modulus": q, "generators": [{"g", "num", "den"}]}`; each generator
/// `g` is sent to `exp(2πi·num/den)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharacterSpec {
    pub modulus: u64,
    pub generators: Vec<GeneratorAssignment>,
}

impl CharacterSpec {
    pub fn build(&self) -> Result<DirichletCharacter, CliError> {
        DirichletCharacter::from_generator_map(self.modulus, &self.generators)
            .map_err(|e| CliError::config("representation.character", e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepresentationBlock {
    pub character: CharacterSpec,
    pub tau: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyBlock {
    pub d0: f64,
    pub d1: f64,
    pub q: u64,
    pub ell: i64,
}

/// The abscissa defaults to the mode's own line when absent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureBlock {
    pub t_max: f64,
    pub nodes: usize,
    pub prime_cutoff: u64,
    pub abscissa: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepBlock {
    pub x_min_factor: f64,
    pub x_max_factor: f64,
    pub points: usize,
    pub mode: RhsMode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AfeBlock {
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: u32,
    pub alpha: f64,
    pub beta: f64,
    pub s0: f64,
    #[serde(rename = "cV")]
    pub c_v: f64,
}

impl From<AfeParameters> for AfeBlock {
    fn from(p: AfeParameters) -> Self {
        AfeBlock {
            a: p.a,
            b: p.b,
            alpha: p.alpha,
            beta: p.beta,
            s0: p.s0.re,
            c_v: p.c_v,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub representation: RepresentationBlock,
    pub family: FamilyBlock,
    pub quadrature: QuadratureBlock,
    pub sweep: SweepBlock,
    pub afe: AfeBlock,
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Preset {
    #[value(name = "fig1-full")]
    Fig1Full,
    #[value(name = "fig1-desk")]
    Fig1Desk,
}

impl RunConfig {
    /// `q = 7`, `χ(3) = e^{iπ/3}`, `τ = 2`, `F = (99000, 101000)`, `ℓ = 1`,
    /// swept over `[0.3, 2.2]·qD/π` at 32 points.
    pub fn preset(preset: Preset) -> Self {
        let q = match preset {
            Preset::Fig1Full => QuadratureSpec::fig1_full(),
            Preset::Fig1Desk => QuadratureSpec::fig1_desk(),
        };
        RunConfig {
            representation: RepresentationBlock {
                character: CharacterSpec {
                    modulus: 7,
                    generators: vec![GeneratorAssignment { g: 3, num: 1, den: 6 }],
                },
                tau: 2.0,
            },
            family: FamilyBlock {
                d0: 99_000.0,
                d1: 101_000.0,
                q: 7,
                ell: 1,
            },
            quadrature: QuadratureBlock {
                t_max: q.t_max,
                nodes: q.nodes,
                prime_cutoff: q.prime_cutoff,
                abscissa: None,
            },
            sweep: SweepBlock {
                x_min_factor: 0.3,
                x_max_factor: 2.2,
                points: 32,
                mode: RhsMode::Sharp,
            },
            afe: AfeParameters::numeric().into(),
            output: None,
        }
    }

    /// The preset with a (possibly partial) JSON document merged over it.
    pub fn layered(preset: Preset, file: Option<&Path>) -> Result<Self, CliError> {
        let base = Self::preset(preset);
        let Some(path) = file else {
            return Ok(base);
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config("config", format!("{}: {e}", path.display())))?;
        let overlay: Value =
            serde_json::from_str(&text).map_err(|e| CliError::config("config", e.to_string()))?;
        let mut merged = serde_json::to_value(&base).expect("config serializes");
        merge(&mut merged, overlay, "")?;
        serde_json::from_value(merged).map_err(|e| CliError::config("config", e.to_string()))
    }

    pub fn character(&self) -> Result<DirichletCharacter, CliError> {
        self.representation.character.build()
    }

    pub fn representation(&self) -> Result<GL1Representation, CliError> {
        GL1Representation::new(self.character()?, self.representation.tau)
            .map_err(|e| CliError::config("representation", e.to_string()))
    }

    pub fn family(&self) -> Result<DiscriminantFamily, CliError> {
        let f = &self.family;
        enumerate_family(f.d0, f.d1, f.q, f.ell).map_err(|e| CliError::config("family", e.to_string()))
    }

    pub fn abscissa(&self) -> f64 {
        self.quadrature.abscissa.unwrap_or_else(|| self.sweep.mode.default_abscissa())
    }

    pub fn quadrature(&self) -> Result<QuadratureSpec, CliError> {
        let b = &self.quadrature;
        let spec = QuadratureSpec {
            t_max: b.t_max,
            nodes: b.nodes,
            prime_cutoff: b.prime_cutoff,
            abscissa: self.abscissa(),
        };
        spec.validate().map_err(|e| CliError::config("quadrature", e.to_string()))?;
        Ok(spec)
    }

    pub fn afe(&self) -> Result<AfeParameters, CliError> {
        let b = &self.afe;
        let p = AfeParameters {
            a: b.a,
            b: b.b,
            alpha: b.alpha,
            beta: b.beta,
            s0: Complex64::new(b.s0, 0.0),
            c_v: b.c_v,
            d_ref: self.family.d1.max(1.0),
        };
        p.validate().map_err(|e| CliError::config("afe", e.to_string()))?;
        Ok(p)
    }

    /// Checks shared by every command that uses the full configuration.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.family.q != self.representation.character.modulus {
            return Err(CliError::config(
                "family.q",
                format!(
                    "family modulus {} differs from the character modulus {}",
                    self.family.q, self.representation.character.modulus
                ),
            ));
        }
        let s = &self.sweep;
        if !(s.x_min_factor > 0.0 && s.x_min_factor < s.x_max_factor) {
            return Err(CliError::config("sweep", "need 0 < x_min_factor < x_max_factor"));
        }
        if s.points == 0 {
            return Err(CliError::config("sweep.points", "need at least one point"));
        }
        self.representation()?;
        self.quadrature()?;
        self.afe()?;
        Ok(())
    }
}

fn merge(base: &mut Value, overlay: Value, path: &str) -> Result<(), CliError> {
    match (base, overlay) {
        (Value::Object(b), Value::Object(o)) => {
            for (k, v) in o {
                let sub = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                match b.get_mut(&k) {
                    Some(slot) => merge(slot, v, &sub)?,
                    None => return Err(CliError::config(&sub, "unknown field")),
                }
            }
            Ok(())
        }
        (slot, v) => {
            *slot = v;
            Ok(())
        }
    }
}

/// `"a/b"` or an integer.
pub fn parse_ratio(text: &str) -> Result<Ratio<i64>, String> {
    let text = text.trim();
    let (n, d) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let n: i64 = n.parse().map_err(|_| format!("bad numerator in {text:?}"))?;
    let d: i64 = d.parse().map_err(|_| format!("bad denominator in {text:?}"))?;
    if d == 0 {
        return Err(format!("zero denominator in {text:?}"));
    }
    Ok(Ratio::new(n, d))
}

/// A character given inline as JSON or as a path to a JSON file.
pub fn parse_character(text: &str) -> Result<CharacterSpec, String> {
    let body = if text.trim_start().starts_with('{') {
        text.to_owned()
    } else {
        std::fs::read_to_string(text).map_err(|e| format!("{text}: {e}"))?
    };
    serde_json::from_str(&body).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratios() {
        assert_eq!(parse_ratio("13/14").unwrap(), Ratio::new(13, 14));
        assert_eq!(parse_ratio(" -2 / 4").unwrap(), Ratio::new(-1, 2));
        assert_eq!(parse_ratio("3").unwrap(), Ratio::from_integer(3));
        assert!(parse_ratio("1/0").is_err());
        assert!(parse_ratio("x/2").is_err());
    }

    #[test]
    fn presets_differ_only_in_quadrature() {
        let full = RunConfig::preset(Preset::Fig1Full);
        let desk = RunConfig::preset(Preset::Fig1Desk);
        assert_eq!(full.family, desk.family);
        assert_eq!(full.representation, desk.representation);
        assert_eq!(desk.quadrature.nodes, 60_001);
        assert_eq!(full.quadrature.nodes, 200_001);
        desk.validate().unwrap();
        full.validate().unwrap();
    }

    #[test]
    fn config_round_trips_and_merges() {
        let desk = RunConfig::preset(Preset::Fig1Desk);
        let text = serde_json::to_string(&desk).unwrap();
        let back: RunConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, desk);

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        std::fs::write(&path, r#"{"sweep": {"points": 5, "mode": "smoothed"}}"#).unwrap();
        let merged = RunConfig::layered(Preset::Fig1Desk, Some(&path)).unwrap();
        assert_eq!(merged.sweep.points, 5);
        assert_eq!(merged.sweep.mode, RhsMode::Smoothed);
        assert_eq!(merged.abscissa(), 0.1);
        assert_eq!(merged.family, desk.family);

        std::fs::write(&path, r#"{"sweep": {"pionts": 5}}"#).unwrap();
        let err = RunConfig::layered(Preset::Fig1Desk, Some(&path)).unwrap_err();
        assert!(err.to_string().contains("sweep.pionts"), "{err}");
    }

    #[test]
    fn character_json() {
        let c = parse_character(r#"{"modulus": 7, "generators": [{"g": 3, "num": 1, "den": 6}]}"#).unwrap();
        assert_eq!(c.build().unwrap().order(), 6);
        assert!(parse_character(r#"{"modulus": 7}"#).is_err());
    }

    #[test]
    fn mismatched_modulus_is_rejected() {
        let mut c = RunConfig::preset(Preset::Fig1Desk);
        c.family.q = 5;
        assert!(c.validate().is_err());
    }
}
