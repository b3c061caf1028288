//! JSON descriptors and artifacts: the file formats the CLI reads and
//! writes. All scalars travel as strings ("p/q" over Q, decimal residues
//! over F_p) with the domain declared once per file; struct field order is
//! the serialization order, so identical inputs produce byte-identical
//! artifacts.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::abelianchain::{build_abelian_chain, AbelianChain, AbelianChainParams};
use crate::crossed::{crossed_product, CrossedProduct, FactorSet};
use crate::fgalg::StructureAlgebra;
use crate::fieldext::{catalog, FieldExtension};
use crate::groups::{FiniteGroup, SolvableSeries};
use crate::scalars::{Domain, Scalar};
use crate::skewpoly::SearchSpec;
use crate::{Error, Result};

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

// ---- scalars and domains ---------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DomainDesc {
    Name(String),
    Prime { p: u64 },
}

impl DomainDesc {
    pub fn to_domain(&self) -> Result<Domain> {
        match self {
            DomainDesc::Name(s) if s == "Q" => Ok(Domain::Rational),
            DomainDesc::Name(s) => Err(Error::InvalidInput(format!("unknown domain {s:?}"))),
            DomainDesc::Prime { p } => Domain::prime(*p),
        }
    }

    pub fn from_domain(d: Domain) -> DomainDesc {
        match d {
            Domain::Rational => DomainDesc::Name("Q".into()),
            Domain::Prime(p) => DomainDesc::Prime { p },
        }
    }
}

pub fn parse_scalars(domain: Domain, strings: &[String]) -> Result<Vec<Scalar>> {
    strings.iter().map(|s| domain.parse(s)).collect()
}

pub fn render_scalars(scalars: &[Scalar]) -> Vec<String> {
    scalars.iter().map(|s| s.to_string()).collect()
}

/// A single scalar that may be written `"3"` or `["3"]` in input files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarField {
    One(String),
    Boxed(Vec<String>),
}

impl ScalarField {
    pub fn parse(&self, domain: Domain) -> Result<Scalar> {
        match self {
            ScalarField::One(s) => domain.parse(s),
            ScalarField::Boxed(v) if v.len() == 1 => domain.parse(&v[0]),
            ScalarField::Boxed(_) => Err(Error::InvalidInput(
                "expected a single scalar, got a longer array".into(),
            )),
        }
    }
}

// ---- extensions -------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutDesc {
    pub name: String,
    pub theta_image: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionDesc {
    pub base: DomainDesc,
    pub minpoly: Vec<String>,
    #[serde(default)]
    pub automorphisms: Vec<AutDesc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl ExtensionDesc {
    pub fn to_extension(&self) -> Result<FieldExtension> {
        let base = self.base.to_domain()?;
        let minpoly = parse_scalars(base, &self.minpoly)?;
        let images: Vec<(String, Vec<Scalar>)> = self
            .automorphisms
            .iter()
            .map(|a| Ok((a.name.clone(), parse_scalars(base, &a.theta_image)?)))
            .collect::<Result<_>>()?;
        let label = self.label.clone().unwrap_or_else(|| "extension".into());
        FieldExtension::make_extension(&label, base, minpoly, &images)
    }

    pub fn from_extension(ext: &FieldExtension) -> ExtensionDesc {
        ExtensionDesc {
            base: DomainDesc::from_domain(ext.base()),
            minpoly: render_scalars(ext.minpoly()),
            automorphisms: ext
                .automorphisms()
                .iter()
                .map(|a| AutDesc {
                    name: a.name.clone(),
                    theta_image: render_scalars(&a.theta_image.coords),
                })
                .collect(),
            label: Some(ext.carrier().label().to_string()),
        }
    }
}

/// Either a catalog name or an inline descriptor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExtensionRef {
    Catalog(String),
    Inline(ExtensionDesc),
}

impl ExtensionRef {
    pub fn resolve(&self) -> Result<FieldExtension> {
        match self {
            ExtensionRef::Catalog(name) => catalog(name),
            ExtensionRef::Inline(desc) => desc.to_extension(),
        }
    }
}

// ---- groups ------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDesc {
    pub labels: Vec<String>,
    pub table: Vec<Vec<usize>>,
}

impl GroupDesc {
    pub fn to_group(&self) -> Result<FiniteGroup> {
        FiniteGroup::new(self.labels.clone(), self.table.clone())
    }

    pub fn from_group(g: &FiniteGroup) -> GroupDesc {
        GroupDesc {
            labels: g.labels().to_vec(),
            table: g.table().to_vec(),
        }
    }
}

// ---- algebras ------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraDesc {
    pub dim: usize,
    pub domain: DomainDesc,
    pub unit: Vec<String>,
    /// flat, length dim³, i-major j-middle k-minor
    pub structconsts: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl AlgebraDesc {
    pub fn to_algebra(&self) -> Result<StructureAlgebra> {
        let domain = self.domain.to_domain()?;
        StructureAlgebra::new(
            self.label.as_deref().unwrap_or("algebra"),
            domain,
            self.dim,
            parse_scalars(domain, &self.unit)?,
            parse_scalars(domain, &self.structconsts)?,
        )
    }

    pub fn from_algebra(a: &StructureAlgebra) -> AlgebraDesc {
        AlgebraDesc {
            dim: a.dim(),
            domain: DomainDesc::from_domain(a.domain()),
            unit: render_scalars(a.unit_coords()),
            structconsts: render_scalars(a.structconsts()),
            label: Some(a.label().to_string()),
        }
    }
}

// ---- factor sets -----------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryDesc {
    pub sigma: String,
    pub tau: String,
    pub value: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorSetDesc {
    pub extension: ExtensionRef,
    /// member automorphism names in basis order; defaults to the full list
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<Vec<String>>,
    #[serde(default)]
    pub entries: Vec<EntryDesc>,
    /// value for unlisted pairs; defaults to 1
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub default: Option<Vec<String>>,
}

impl FactorSetDesc {
    pub fn to_factor_set(&self) -> Result<FactorSet> {
        let ext = Arc::new(self.extension.resolve()?);
        let members: Vec<usize> = match &self.group {
            None => (0..ext.automorphisms().len()).collect(),
            Some(names) => names
                .iter()
                .map(|n| ext.automorphism_by_name(n))
                .collect::<Result<_>>()?,
        };
        let carrier = ext.carrier().clone();
        let default = match &self.default {
            None => carrier.one(),
            Some(v) => carrier.element(parse_scalars(carrier.domain(), v)?)?,
        };
        let g = members.len();
        let mut entries = vec![vec![default; g]; g];
        let pos_of = |name: &str| -> Result<usize> {
            let idx = ext.automorphism_by_name(name)?;
            members
                .iter()
                .position(|&m| m == idx)
                .ok_or_else(|| Error::InvalidInput(format!("{name:?} is not a member of the factor set group")))
        };
        for e in &self.entries {
            let a = pos_of(&e.sigma)?;
            let b = pos_of(&e.tau)?;
            entries[a][b] = carrier.element(parse_scalars(carrier.domain(), &e.value)?)?;
        }
        FactorSet::new(ext, members, entries)
    }

    pub fn from_factor_set(fs: &FactorSet) -> FactorSetDesc {
        let g = fs.members().len();
        let mut entries = Vec::with_capacity(g * g);
        for a in 0..g {
            for b in 0..g {
                entries.push(EntryDesc {
                    sigma: fs.group().label(a).to_string(),
                    tau: fs.group().label(b).to_string(),
                    value: render_scalars(&fs.entry(a, b).coords),
                });
            }
        }
        FactorSetDesc {
            extension: ExtensionRef::Inline(ExtensionDesc::from_extension(fs.extension())),
            group: Some(
                fs.members()
                    .iter()
                    .map(|&m| fs.extension().automorphism(m).name.clone())
                    .collect(),
            ),
            entries,
            default: None,
        }
    }
}

// ---- search specs ------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSpecDesc {
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<u32>,
}

impl SearchSpecDesc {
    pub fn to_search_spec(&self) -> Result<SearchSpec> {
        match self.mode.as_str() {
            "exhaustive" => Ok(SearchSpec::Exhaustive),
            "height" => Ok(SearchSpec::Height(self.bound.unwrap_or(3))),
            other => Err(Error::InvalidInput(format!("unknown search mode {other:?}"))),
        }
    }

    pub fn from_search_spec(s: &SearchSpec) -> SearchSpecDesc {
        match s {
            SearchSpec::Exhaustive => SearchSpecDesc {
                mode: "exhaustive".into(),
                bound: None,
            },
            SearchSpec::Height(b) => SearchSpecDesc {
                mode: "height".into(),
                bound: Some(*b),
            },
        }
    }
}

// ---- chain build descriptors ----------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SeriesRef {
    Auto(String),
    Subgroups(Vec<Vec<usize>>),
}

impl Default for SeriesRef {
    fn default() -> Self {
        SeriesRef::Auto("auto".into())
    }
}

impl SeriesRef {
    pub fn resolve(&self, group: &FiniteGroup) -> Result<SolvableSeries> {
        match self {
            SeriesRef::Auto(s) if s == "auto" => group.composition_series(),
            SeriesRef::Auto(s) => Err(Error::InvalidInput(format!(
                "series must be \"auto\" or explicit subgroups, got {s:?}"
            ))),
            SeriesRef::Subgroups(subs) => {
                let sets: Vec<BTreeSet<usize>> =
                    subs.iter().map(|v| v.iter().copied().collect()).collect();
                SolvableSeries::from_subgroups(group, sets)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainBuildDesc {
    pub extension: ExtensionRef,
    #[serde(default)]
    pub series: SeriesRef,
    pub c0: ScalarField,
    #[serde(default)]
    pub l: Vec<ScalarField>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe: Option<SearchSpecDesc>,
}

impl ChainBuildDesc {
    pub fn to_params(&self) -> Result<(AbelianChainParams, Option<SearchSpec>)> {
        let ext = Arc::new(self.extension.resolve()?);
        let group = ext.aut_group()?;
        let series = self.series.resolve(&group)?;
        let c0 = self.c0.parse(ext.base())?;
        let l = self
            .l
            .iter()
            .map(|s| s.parse(ext.base()))
            .collect::<Result<_>>()?;
        let params = AbelianChainParams::new(ext, series, c0, l)?;
        let probe = self
            .probe
            .as_ref()
            .map(|p| p.to_search_spec())
            .transpose()?;
        Ok((params, probe))
    }
}

/// Generalized cyclic build (M, σ, d) with f = t^m − d.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicDesc {
    pub extension: ExtensionRef,
    pub sigma: String,
    /// d in M-coordinates (a bare string means d·1)
    pub d: ScalarFieldOrCoords,
    pub m: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarFieldOrCoords {
    Scalar(String),
    Coords(Vec<String>),
}

impl CyclicDesc {
    /// Resolve to the generalized cyclic data (S = M carrier, σ, d, m).
    pub fn to_spec(&self) -> Result<(Arc<FieldExtension>, usize, crate::skewpoly::GeneralizedCyclicSpec)> {
        let ext = Arc::new(self.extension.resolve()?);
        let sigma_idx = ext.automorphism_by_name(&self.sigma)?;
        let carrier = ext.carrier().clone();
        let d = match &self.d {
            ScalarFieldOrCoords::Scalar(s) => carrier.scalar_element(&carrier.domain().parse(s)?),
            ScalarFieldOrCoords::Coords(v) => carrier.element(parse_scalars(carrier.domain(), v)?)?,
        };
        let spec = crate::skewpoly::GeneralizedCyclicSpec::new(
            carrier,
            ext.automorphism(sigma_idx).map.clone(),
            d,
            self.m,
        )?;
        Ok((ext, sigma_idx, spec))
    }
}

// ---- artifacts -----------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossedArtifact {
    pub kind: String,
    pub extension: ExtensionDesc,
    pub group: GroupDesc,
    pub factor_set: Vec<EntryDesc>,
    pub algebra: AlgebraDesc,
    pub galois: bool,
    pub center_dim: usize,
}

impl CrossedArtifact {
    pub fn from_crossed_product(cp: &CrossedProduct) -> CrossedArtifact {
        let fs_desc = FactorSetDesc::from_factor_set(cp.factor_set());
        CrossedArtifact {
            kind: "crossed".into(),
            extension: ExtensionDesc::from_extension(cp.extension()),
            group: GroupDesc::from_group(cp.group()),
            factor_set: fs_desc.entries,
            algebra: AlgebraDesc::from_algebra(cp.algebra()),
            galois: cp.is_galois_product(),
            center_dim: cp.center_basis().len(),
        }
    }

    /// Reconstruct the crossed product deterministically from the stored
    /// extension and factor set.
    pub fn rebuild(&self) -> Result<CrossedProduct> {
        let desc = FactorSetDesc {
            extension: ExtensionRef::Inline(self.extension.clone()),
            group: Some(self.group.labels.clone()),
            entries: self.factor_set.clone(),
            default: None,
        };
        let fs = desc.to_factor_set()?;
        crossed_product(&fs, self.algebra.label.as_deref().unwrap_or("crossed product"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelDesc {
    pub index: usize,
    pub q: u64,
    pub dim: usize,
    pub center_dim: usize,
    pub exponents: Vec<u64>,
    pub c: Vec<String>,
    pub tau: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainArtifact {
    pub kind: String,
    pub extension: ExtensionDesc,
    pub series: Vec<Vec<usize>>,
    pub c0: String,
    pub l: Vec<String>,
    pub levels: Vec<LevelDesc>,
    pub algebra: AlgebraDesc,
    pub center_dim: usize,
}

impl ChainArtifact {
    pub fn from_chain(chain: &AbelianChain) -> Result<ChainArtifact> {
        let mut levels = Vec::with_capacity(chain.levels.len());
        for level in &chain.levels {
            let tau_m = level.tau.matrix();
            let tau = (0..tau_m.rows())
                .map(|i| render_scalars(tau_m.row(i)))
                .collect();
            levels.push(LevelDesc {
                index: level.index,
                q: level.q,
                dim: level.prev.dim(),
                center_dim: level.prev.center()?.len(),
                exponents: level.exponents.clone(),
                c: render_scalars(&level.c.coords),
                tau,
            });
        }
        Ok(ChainArtifact {
            kind: "abelian-chain".into(),
            extension: ExtensionDesc::from_extension(&chain.ext),
            series: chain
                .series
                .subgroups
                .iter()
                .map(|s| s.iter().copied().collect())
                .collect(),
            c0: chain.c0.to_string(),
            l: render_scalars(&chain.l),
            levels,
            algebra: AlgebraDesc::from_algebra(&chain.final_algebra),
            center_dim: chain.final_algebra.center()?.len(),
        })
    }

    pub fn rebuild(&self) -> Result<AbelianChain> {
        let ext = Arc::new(self.extension.to_extension()?);
        let group = ext.aut_group()?;
        let sets: Vec<BTreeSet<usize>> = self
            .series
            .iter()
            .map(|v| v.iter().copied().collect())
            .collect();
        let series = SolvableSeries::from_subgroups(&group, sets)?;
        let c0 = ext.base().parse(&self.c0)?;
        let l = parse_scalars(ext.base(), &self.l)?;
        let params = AbelianChainParams::new(ext, series, c0, l)?;
        build_abelian_chain(&params)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicArtifact {
    pub kind: String,
    pub extension: ExtensionDesc,
    pub sigma: String,
    pub d: Vec<String>,
    pub m: usize,
    pub algebra: AlgebraDesc,
    pub center_dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree_over_center: Option<u64>,
    pub s_centralizer_is_center_of_s: bool,
}

impl CyclicArtifact {
    pub fn from_build(
        ext: &FieldExtension,
        sigma_idx: usize,
        spec: &crate::skewpoly::GeneralizedCyclicSpec,
        build: &crate::skewpoly::GcaBuild,
    ) -> CyclicArtifact {
        CyclicArtifact {
            kind: "cyclic".into(),
            extension: ExtensionDesc::from_extension(ext),
            sigma: ext.automorphism(sigma_idx).name.clone(),
            d: render_scalars(&spec.d.coords),
            m: spec.m,
            algebra: AlgebraDesc::from_algebra(&build.quotient.algebra),
            center_dim: build.report.center_dim,
            degree_over_center: build.report.degree_over_center,
            s_centralizer_is_center_of_s: build.report.s_centralizer_is_center_of_s,
        }
    }

    /// Rebuild the generalized cyclic data for probing.
    pub fn rebuild(&self) -> Result<(Arc<FieldExtension>, usize, crate::skewpoly::GeneralizedCyclicSpec)> {
        let desc = CyclicDesc {
            extension: ExtensionRef::Inline(self.extension.clone()),
            sigma: self.sigma.clone(),
            d: ScalarFieldOrCoords::Coords(self.d.clone()),
            m: self.m,
        };
        desc.to_spec()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domain_round_trip() {
        for d in [Domain::Rational, Domain::prime(7).unwrap()] {
            let desc = DomainDesc::from_domain(d);
            assert_eq!(desc.to_domain().unwrap(), d);
        }
        let json = serde_json::to_string(&DomainDesc::from_domain(Domain::Rational)).unwrap();
        assert_eq!(json, "\"Q\"");
        let json = serde_json::to_string(&DomainDesc::from_domain(Domain::prime(5).unwrap())).unwrap();
        assert_eq!(json, "{\"p\":5}");
    }

    #[test]
    fn extension_desc_round_trip() {
        let ext = catalog("gauss_Q_i").unwrap();
        let desc = ExtensionDesc::from_extension(&ext);
        let back = desc.to_extension().unwrap();
        assert_eq!(back.degree(), 2);
        assert_eq!(back.automorphisms().len(), 2);
        let json = serde_json::to_string(&desc).unwrap();
        let parsed: ExtensionDesc = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed, desc);
    }

    #[test]
    fn factor_set_desc_with_default() {
        let json = r#"{
            "extension": "gauss_Q_i",
            "entries": [{"sigma": "conj", "tau": "conj", "value": ["-1", "0"]}]
        }"#;
        let desc: FactorSetDesc = serde_json::from_str(json).unwrap();
        let fs = desc.to_factor_set().unwrap();
        assert!(crate::crossed::validate_cocycle(&fs).unwrap().pass);
        let q = Domain::Rational;
        assert_eq!(fs.entry(1, 1).coords, vec![q.from_i64(-1), q.from_i64(0)]);
        assert_eq!(fs.entry(0, 1).coords, vec![q.from_i64(1), q.from_i64(0)]);
    }

    #[test]
    fn chain_desc_accepts_scalar_or_singleton() {
        for c0 in [r#""3""#, r#"["3"]"#] {
            let json = format!(
                r#"{{"extension": "Q_sqrt2_sqrt3", "series": "auto", "c0": {c0}, "l": ["-1"]}}"#
            );
            let desc: ChainBuildDesc = serde_json::from_str(&json).unwrap();
            let (params, probe) = desc.to_params().unwrap();
            assert_eq!(params.c0, Domain::Rational.from_i64(3));
            assert!(probe.is_none());
        }
    }

    #[test]
    fn chain_artifact_round_trip() {
        let json = r#"{"extension": "gauss_Q_i", "c0": "-1"}"#;
        let desc: ChainBuildDesc = serde_json::from_str(json).unwrap();
        let (params, _) = desc.to_params().unwrap();
        let chain = build_abelian_chain(&params).unwrap();
        let artifact = ChainArtifact::from_chain(&chain).unwrap();
        let text = serde_json::to_string_pretty(&artifact).unwrap();
        let parsed: ChainArtifact = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed, artifact);
        let rebuilt = parsed.rebuild().unwrap();
        assert_eq!(
            rebuilt.final_algebra.structconsts(),
            chain.final_algebra.structconsts()
        );
    }

    #[test]
    fn crossed_artifact_round_trip() {
        let ext = Arc::new(catalog("gauss_Q_i").unwrap());
        let conj = ext.automorphism_by_name("conj").unwrap();
        let c = ext.carrier().scalar_element(&Domain::Rational.from_i64(-1));
        let fs = FactorSet::cyclic(ext, conj, &c).unwrap();
        let cp = crossed_product(&fs, "quat").unwrap();
        let artifact = CrossedArtifact::from_crossed_product(&cp);
        let text = serde_json::to_string(&artifact).unwrap();
        let parsed: CrossedArtifact = serde_json::from_str(&text).unwrap();
        let rebuilt = parsed.rebuild().unwrap();
        assert_eq!(rebuilt.algebra().structconsts(), cp.algebra().structconsts());
    }

    #[test]
    fn search_spec_desc() {
        let s: SearchSpecDesc = serde_json::from_str(r#"{"mode": "height", "bound": 3}"#).unwrap();
        assert_eq!(s.to_search_spec().unwrap(), SearchSpec::Height(3));
        let s: SearchSpecDesc = serde_json::from_str(r#"{"mode": "exhaustive"}"#).unwrap();
        assert_eq!(s.to_search_spec().unwrap(), SearchSpec::Exhaustive);
        let s: SearchSpecDesc = serde_json::from_str(r#"{"mode": "banana"}"#).unwrap();
        assert!(s.to_search_spec().is_err());
    }

    #[test]
    fn digest_is_stable() {
        assert_eq!(
            sha256_hex(b"skewlab"),
            sha256_hex(b"skewlab"),
        );
        assert_ne!(sha256_hex(b"a"), sha256_hex(b"b"));
    }
}
