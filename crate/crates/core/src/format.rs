//! JSON file formats: complexes, ψ maps and enriched manifests.
//!
//! Rationals are strings `"p/q"`; entries are `{from, to, ypow}` with the
//! power optional (it is pinned by the gradings anyway).

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::complex::{pinned_power, Flavor, Generator, InstantonComplex, LinearMap};
use crate::enriched::{ClusterSet, Composition, EnrichedComplex, EnrichedTerm, Psi};
use crate::error::{Error, Result};
use crate::filt::{fmt_rational, parse_rational};
use crate::involutive::InvolutiveComplex;

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct GeneratorRecord {
    pub id: String,
    pub deg_z: i64,
    pub deg_i: String,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub theta: bool,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct EntryRecord {
    pub from: String,
    pub to: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ypow: Option<i64>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ComplexFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<serde_json::Value>,
    pub flavor: String,
    pub generators: Vec<GeneratorRecord>,
    #[serde(default)]
    pub diff: Vec<EntryRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<Vec<EntryRecord>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_level: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h_witness: Option<Vec<EntryRecord>>,
}

/// A complex as read from disk, before semantic validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoadedComplex {
    pub name: Option<String>,
    pub complex: InvolutiveComplex,
    /// Whether the file carried a τ (otherwise τ = id).
    pub has_tau: bool,
}

fn syntax(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

fn field(path: &str, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{path}: {msg}"))
}

fn rational_field(path: &str, s: &str) -> Result<BigRational> {
    parse_rational(s).map_err(|_| field(path, format!("not a rational: {s:?}")))
}

fn parse_flavor(s: &str) -> Result<Flavor> {
    match s {
        "D2" => Ok(Flavor::D2),
        "D1" => Ok(Flavor::D1),
        other => Err(field("flavor", format!("expected \"D2\" or \"D1\", got {other:?}"))),
    }
}

/// Build a map from entry records, reporting problems by field path.
pub fn entries_to_map(
    path: &str,
    entries: &[EntryRecord],
    src: &[Generator],
    tgt: &[Generator],
    shift: i64,
) -> Result<LinearMap> {
    let si: HashMap<&str, usize> = src.iter().enumerate().map(|(i, g)| (g.id.as_str(), i)).collect();
    let ti: HashMap<&str, usize> = tgt.iter().enumerate().map(|(i, g)| (g.id.as_str(), i)).collect();
    let mut m = LinearMap::zero(shift);
    for (n, e) in entries.iter().enumerate() {
        let at = format!("{path}[{n}]");
        let g = *si
            .get(e.from.as_str())
            .ok_or_else(|| field(&format!("{at}.from"), format!("unknown generator {:?}", e.from)))?;
        let h = *ti
            .get(e.to.as_str())
            .ok_or_else(|| field(&format!("{at}.to"), format!("unknown generator {:?}", e.to)))?;
        let Some(k) = pinned_power(&src[g], &tgt[h], shift) else {
            return Err(field(
                &at,
                format!(
                    "no power of y matches gradings {} -> {} with shift {shift}",
                    src[g].deg_z, tgt[h].deg_z
                ),
            ));
        };
        if let Some(p) = e.ypow {
            if p != k {
                return Err(field(&format!("{at}.ypow"), format!("gradings force y^{k}, got y^{p}")));
            }
        }
        if m.contains(g, h) {
            return Err(field(&at, format!("duplicate entry {} -> {}", e.from, e.to)));
        }
        m.toggle(src, tgt, g, h)?;
    }
    Ok(m)
}

pub fn map_to_entries(m: &LinearMap, src: &[Generator], tgt: &[Generator]) -> Vec<EntryRecord> {
    m.entries()
        .map(|(g, h, k)| EntryRecord {
            from: src[g].id.clone(),
            to: tgt[h].id.clone(),
            ypow: Some(k),
        })
        .collect()
}

impl ComplexFile {
    pub fn into_complex(self) -> Result<LoadedComplex> {
        let flavor = parse_flavor(&self.flavor)?;
        let mut gens = Vec::with_capacity(self.generators.len());
        for (n, g) in self.generators.iter().enumerate() {
            let deg_i = rational_field(&format!("generators[{n}].deg_i"), &g.deg_i)?;
            gens.push(Generator {
                id: g.id.clone(),
                deg_z: g.deg_z,
                deg_i,
                is_theta: g.theta,
            });
        }
        let diff = entries_to_map("diff", &self.diff, &gens, &gens, -1)?;
        let complex = InstantonComplex::from_parts(flavor, gens, diff)?;
        let has_tau = self.tau.is_some();
        let tau = match &self.tau {
            Some(t) => entries_to_map("tau", t, &complex.gens, &complex.gens, 0)?,
            None => LinearMap::identity(&complex.gens),
        };
        let level = match &self.tau_level {
            Some(l) => rational_field("tau_level", l)?,
            None => BigRational::zero(),
        };
        let h = match &self.h_witness {
            Some(h) => Some(entries_to_map("h_witness", h, &complex.gens, &complex.gens, 1)?),
            None if !has_tau => Some(LinearMap::zero(1)),
            None => None,
        };
        Ok(LoadedComplex {
            name: self.name,
            complex: InvolutiveComplex::from_parts(complex, tau, level, h)?,
            has_tau,
        })
    }

    pub fn from_complex(c: &InvolutiveComplex, name: Option<&str>, provenance: Option<serde_json::Value>) -> Self {
        let gens = c.gens();
        ComplexFile {
            name: name.map(str::to_string),
            provenance,
            flavor: c.flavor().to_string(),
            generators: gens
                .iter()
                .map(|g| GeneratorRecord {
                    id: g.id.clone(),
                    deg_z: g.deg_z,
                    deg_i: fmt_rational(&g.deg_i),
                    theta: g.is_theta,
                })
                .collect(),
            diff: map_to_entries(&c.complex.diff, gens, gens),
            tau: Some(map_to_entries(&c.tau, gens, gens)),
            tau_level: Some(fmt_rational(&c.level)),
            h_witness: c.h_witness.as_ref().map(|h| map_to_entries(h, gens, gens)),
        }
    }
}

/// Parse a complex file without validating it.
pub fn parse_complex(text: &str) -> Result<LoadedComplex> {
    let raw: ComplexFile = serde_json::from_str(text).map_err(syntax)?;
    raw.into_complex()
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn load_complex(path: &Path) -> Result<LoadedComplex> {
    parse_complex(&read(path)?).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

/// Pretty JSON for a complex, with a trailing newline.
pub fn complex_to_string(c: &InvolutiveComplex, name: Option<&str>, provenance: Option<serde_json::Value>) -> String {
    let f = ComplexFile::from_complex(c, name, provenance);
    serde_json::to_string_pretty(&f).expect("serializable") + "\n"
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct MapFile {
    #[serde(default)]
    pub f: Vec<EntryRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<Vec<EntryRecord>>,
}

/// A ψ file: the chain map `f` and, optionally, its equivariance homotopy.
pub fn parse_map(text: &str, src: &InvolutiveComplex, tgt: &InvolutiveComplex) -> Result<(LinearMap, Option<LinearMap>)> {
    let raw: MapFile = serde_json::from_str(text).map_err(syntax)?;
    let f = entries_to_map("f", &raw.f, src.gens(), tgt.gens(), 0)?;
    let h = match &raw.h {
        Some(h) => Some(entries_to_map("h", h, src.gens(), tgt.gens(), 1)?),
        None => None,
    };
    Ok((f, h))
}

pub fn map_to_string(f: &LinearMap, h: Option<&LinearMap>, src: &InvolutiveComplex, tgt: &InvolutiveComplex) -> String {
    let raw = MapFile {
        f: map_to_entries(f, src.gens(), tgt.gens()),
        h: h.map(|h| map_to_entries(h, src.gens(), tgt.gens())),
    };
    serde_json::to_string_pretty(&raw).expect("serializable") + "\n"
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct TermRecord {
    pub file: PathBuf,
    pub level: String,
    pub radius: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct PsiRecord {
    pub from: usize,
    pub to: usize,
    /// Omitted for the identity on equal generator lists.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<PathBuf>,
    pub level: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct CompositionRecord {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub level: String,
}

/// Enriched manifest; indices are 1-based, paths relative to the manifest.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub cluster_set: Vec<String>,
    pub terms: Vec<TermRecord>,
    #[serde(default)]
    pub psi: Vec<PsiRecord>,
    #[serde(default)]
    pub compositions: Vec<CompositionRecord>,
}

fn index(path: &str, i: usize, n: usize) -> Result<usize> {
    if i == 0 || i > n {
        return Err(field(path, format!("index {i} out of range 1..={n}")));
    }
    Ok(i - 1)
}

pub fn load_manifest(path: &Path) -> Result<EnrichedComplex> {
    let raw: Manifest = serde_json::from_str(&read(path)?)
        .map_err(syntax)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let mut cluster = Vec::new();
    for (n, k) in raw.cluster_set.iter().enumerate() {
        cluster.push(rational_field(&format!("cluster_set[{n}]"), k)?);
    }
    let mut terms = Vec::new();
    for (n, t) in raw.terms.iter().enumerate() {
        let c = load_complex(&dir.join(&t.file))?;
        terms.push(EnrichedTerm {
            complex: c.complex,
            level: rational_field(&format!("terms[{n}].level"), &t.level)?,
            radius: rational_field(&format!("terms[{n}].radius"), &t.radius)?,
        });
    }
    let nt = terms.len();
    let mut psi = Vec::new();
    for (n, p) in raw.psi.iter().enumerate() {
        let at = format!("psi[{n}]");
        let from = index(&format!("{at}.from"), p.from, nt)?;
        let to = index(&format!("{at}.to"), p.to, nt)?;
        let (src, tgt) = (&terms[from].complex, &terms[to].complex);
        let (f, h) = match &p.file {
            Some(file) => {
                let file = dir.join(file);
                parse_map(&read(&file)?, src, tgt).map_err(|e| Error::Parse(format!("{}: {e}", file.display())))?
            }
            None => {
                let same = src.gens().len() == tgt.gens().len()
                    && src.gens().iter().zip(tgt.gens()).all(|(a, b)| a.id == b.id && a.deg_z == b.deg_z);
                if !same {
                    return Err(field(&format!("{at}.file"), "identity needs matching generator lists"));
                }
                (LinearMap::identity(src.gens()), None)
            }
        };
        psi.push(Psi {
            from,
            to,
            f,
            h,
            level: rational_field(&format!("{at}.level"), &p.level)?,
        });
    }
    let mut compositions = Vec::new();
    for (n, c) in raw.compositions.iter().enumerate() {
        let at = format!("compositions[{n}]");
        compositions.push(Composition {
            i: index(&format!("{at}.i"), c.i, nt)?,
            j: index(&format!("{at}.j"), c.j, nt)?,
            k: index(&format!("{at}.k"), c.k, nt)?,
            level: rational_field(&format!("{at}.level"), &c.level)?,
        });
    }
    Ok(EnrichedComplex {
        terms,
        psi,
        cluster: ClusterSet::new(&cluster),
        compositions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build_fig41, Fig41};
    use crate::filt::q;

    #[test]
    fn round_trip() {
        let c = build_fig41(Fig41::B, &q(-3, 4), &q(1, 2), &q(-1, 4)).unwrap().with_witness().unwrap();
        let text = complex_to_string(&c, Some("fig41b"), None);
        let back = parse_complex(&text).unwrap();
        assert_eq!(back.complex, c);
        assert_eq!(back.name.as_deref(), Some("fig41b"));
        assert_eq!(complex_to_string(&back.complex, Some("fig41b"), None), text);
    }

    #[test]
    fn diagnostics() {
        let e = parse_complex("{\"flavor\": \"D2\",\n \"generators\": [}").unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
        let e = parse_complex(r#"{"flavor":"D2","generators":[],"extra":1}"#).unwrap_err();
        assert!(e.to_string().contains("unknown field"), "{e}");
        let text = r#"{"flavor":"D2","generators":[
            {"id":"theta","deg_z":-3,"deg_i":"0","theta":true},
            {"id":"x","deg_z":-4,"deg_i":"-1/2"}],
            "diff":[{"from":"theta","to":"x"},{"from":"x","to":"q"}]}"#;
        let e = parse_complex(text).unwrap_err();
        assert_eq!(e.to_string(), "parse error: diff[1].to: unknown generator \"q\"");
        let bad = text.replace(r#"{"from":"x","to":"q"}"#, r#"{"from":"theta","to":"x","ypow":1}"#);
        assert!(parse_complex(&bad).unwrap_err().to_string().contains("diff[1]"));
        let bad = text.replace("-1/2", "half");
        assert!(parse_complex(&bad).unwrap_err().to_string().contains("generators[1].deg_i"));
    }

    #[test]
    fn missing_tau_is_identity() {
        let text = r#"{"flavor":"D2","generators":[{"id":"t","deg_z":-3,"deg_i":"0","theta":true}]}"#;
        let c = parse_complex(text).unwrap();
        assert!(!c.has_tau);
        assert!(c.complex.validate().passed());
        assert_eq!(c.complex.tau, LinearMap::identity(c.complex.gens()));
    }
}
