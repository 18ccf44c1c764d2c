//! The 2-D OOC data model: code matrices, the periodic correlation oracle,
//! structural classification, and family verification.
//!
//! A codeword is a {0,1} array of `lambda` wavelength rows by `T` time-slot
//! columns with constant Hamming weight `omega`, stored sparsely as its pulse
//! set. The correlation between two arrays at time shift `tau` is
//!
//! ```text
//! sum_l sum_t A(l, t) * B(l, t (+) tau)      (addition cyclic mod T)
//! ```
//!
//! and a family has maximum collision parameter (MCP) `kappa` when every
//! nontrivial auto- or cross-correlation is at most `kappa`. Shifts apply
//! only along the time axis; wavelengths never shift.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

/// Declared parameters of a family: shape, weight, and claimed MCP.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodeParams {
    pub lambda: u32,
    pub t: u32,
    pub omega: u32,
    pub kappa: u32,
}

impl CodeParams {
    pub fn new(lambda: u32, t: u32, omega: u32, kappa: u32) -> Result<Self> {
        if lambda < 1 || t < 1 || omega < 1 {
            return Err(Error::InvalidParams(
                "lambda, T and omega must be positive".into(),
            ));
        }
        if omega as u64 > lambda as u64 * t as u64 {
            return Err(Error::InvalidParams(format!(
                "weight {omega} exceeds array size {}",
                lambda as u64 * t as u64
            )));
        }
        if kappa >= omega {
            return Err(Error::InvalidParams(format!(
                "kappa {kappa} must be smaller than omega {omega}"
            )));
        }
        Ok(CodeParams {
            lambda,
            t,
            omega,
            kappa,
        })
    }
}

/// One codeword: a sparse set of (wavelength, time) pulses.
///
/// Pulses are kept sorted and deduplicated, so equality on `CodeMatrix`
/// is set equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CodeMatrix {
    lambda: u32,
    t: u32,
    pulses: Vec<(u32, u32)>,
}

impl CodeMatrix {
    pub fn new(lambda: u32, t: u32, mut pulses: Vec<(u32, u32)>) -> Result<Self> {
        pulses.sort_unstable();
        let before = pulses.len();
        pulses.dedup();
        if pulses.len() != before {
            return Err(Error::ValidationFailed("duplicate pulse coordinates".into()));
        }
        for &(l, tt) in &pulses {
            if l >= lambda || tt >= t {
                return Err(Error::ValidationFailed(format!(
                    "pulse ({l}, {tt}) outside {lambda}x{t} array"
                )));
            }
        }
        Ok(CodeMatrix { lambda, t, pulses })
    }

    pub fn lambda(&self) -> u32 {
        self.lambda
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn weight(&self) -> u32 {
        self.pulses.len() as u32
    }

    pub fn pulses(&self) -> &[(u32, u32)] {
        &self.pulses
    }

    /// The matrix with every pulse moved from (l, t) to (l, t + delta mod T).
    pub fn shift_time(&self, delta: u32) -> CodeMatrix {
        let mut pulses: Vec<(u32, u32)> = self
            .pulses
            .iter()
            .map(|&(l, tt)| (l, (tt + delta) % self.t))
            .collect();
        pulses.sort_unstable();
        CodeMatrix {
            lambda: self.lambda,
            t: self.t,
            pulses,
        }
    }

    fn times_by_wavelength(&self) -> BTreeMap<u32, Vec<u32>> {
        let mut map: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
        for &(l, tt) in &self.pulses {
            map.entry(l).or_default().push(tt);
        }
        map
    }
}

/// Correlation of A against B at time shift tau, per the double sum above.
pub fn correlation(a: &CodeMatrix, b: &CodeMatrix, tau: u32) -> Result<u32> {
    if a.lambda != b.lambda || a.t != b.t {
        return Err(Error::ShapeMismatch(a.lambda, a.t, b.lambda, b.t));
    }
    let b_set: BTreeSet<(u32, u32)> = b.pulses.iter().copied().collect();
    let mut count = 0;
    for &(l, tt) in &a.pulses {
        if b_set.contains(&(l, (tt + tau) % a.t)) {
            count += 1;
        }
    }
    Ok(count)
}

/// Correlations of A against B at every shift at once: entry tau of the
/// returned vector is correlation(A, B, tau). One pass over pulse pairs
/// sharing a wavelength, O(omega^2) total.
pub fn correlation_histogram(a: &CodeMatrix, b: &CodeMatrix, t: u32) -> Vec<u32> {
    let mut hist = vec![0u32; t as usize];
    let b_by_l = b.times_by_wavelength();
    for &(l, ta) in &a.pulses {
        if let Some(times) = b_by_l.get(&l) {
            for &tb in times {
                hist[((tb + t - ta % t) % t) as usize] += 1;
            }
        }
    }
    hist
}

/// Per-axis structural label of a single matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowClass {
    /// Every row has weight exactly 1 (one pulse per wavelength).
    Oppw,
    /// Every row has weight at most 1.
    AmOppw,
    /// Some row has weight 2 or more.
    Unconstrained,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColClass {
    /// Every column has weight exactly 1 (one pulse per time slot).
    Oppts,
    /// Every column has weight at most 1.
    AmOppts,
    /// Some column has weight 2 or more.
    Unconstrained,
}

/// Family-level structure label, the strongest constraint shared by every
/// matrix. Row constraints take precedence over column constraints because
/// they select the tighter size bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StructureClass {
    Oppw,
    AmOppw,
    Oppts,
    AmOppts,
    Unrestricted,
}

impl fmt::Display for StructureClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            StructureClass::Oppw => "OPPW",
            StructureClass::AmOppw => "AM-OPPW",
            StructureClass::Oppts => "OPPTS",
            StructureClass::AmOppts => "AM-OPPTS",
            StructureClass::Unrestricted => "UNRESTRICTED",
        };
        f.write_str(s)
    }
}

/// Strongest applicable label per axis for one matrix.
pub fn classify(m: &CodeMatrix) -> (RowClass, ColClass) {
    let mut row_weight = vec![0u32; m.lambda as usize];
    let mut col_weight = vec![0u32; m.t as usize];
    for &(l, tt) in &m.pulses {
        row_weight[l as usize] += 1;
        col_weight[tt as usize] += 1;
    }
    let row = if row_weight.iter().all(|&w| w == 1) {
        RowClass::Oppw
    } else if row_weight.iter().all(|&w| w <= 1) {
        RowClass::AmOppw
    } else {
        RowClass::Unconstrained
    };
    let col = if col_weight.iter().all(|&w| w == 1) {
        ColClass::Oppts
    } else if col_weight.iter().all(|&w| w <= 1) {
        ColClass::AmOppts
    } else {
        ColClass::Unconstrained
    };
    (row, col)
}

/// A verified family of code matrices plus its provenance.
#[derive(Debug, Clone)]
pub struct CodeFamily {
    pub params: CodeParams,
    matrices: Vec<CodeMatrix>,
    pub provenance: String,
    pub certified_mcp: Option<u32>,
}

impl CodeFamily {
    /// Build a family, enforcing shape, constant weight, and pairwise
    /// distinctness. Generators go through here, so a duplicate is a bug
    /// in the construction and a hard error.
    pub fn new(
        params: CodeParams,
        matrices: Vec<CodeMatrix>,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for m in &matrices {
            if m.lambda != params.lambda || m.t != params.t {
                return Err(Error::ShapeMismatch(params.lambda, params.t, m.lambda, m.t));
            }
            if m.weight() != params.omega {
                return Err(Error::ValidationFailed(format!(
                    "matrix weight {} differs from omega {}",
                    m.weight(),
                    params.omega
                )));
            }
            if !seen.insert(m.pulses.clone()) {
                return Err(Error::ValidationFailed("duplicate matrix in family".into()));
            }
        }
        Ok(CodeFamily {
            params,
            matrices,
            provenance: provenance.into(),
            certified_mcp: None,
        })
    }

    /// Build without weight/distinctness enforcement, for loaded files whose
    /// defects should surface in a verification report instead.
    pub fn from_parts_unchecked(
        params: CodeParams,
        matrices: Vec<CodeMatrix>,
        provenance: impl Into<String>,
    ) -> Self {
        CodeFamily {
            params,
            matrices,
            provenance: provenance.into(),
            certified_mcp: None,
        }
    }

    pub fn matrices(&self) -> &[CodeMatrix] {
        &self.matrices
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    /// Exact MCP: the maximum of all off-peak auto-correlations and all
    /// cross-correlations over every shift. The result is cached.
    pub fn certify_mcp(&mut self) -> Result<u32> {
        let mcp = certify_mcp(&self.matrices, self.params.t)?;
        self.certified_mcp = Some(mcp);
        Ok(mcp)
    }

    /// Strongest structure label shared by all matrices.
    pub fn structure_class(&self) -> StructureClass {
        let mut row = RowClass::Oppw;
        let mut col = ColClass::Oppts;
        for m in &self.matrices {
            let (r, c) = classify(m);
            row = match (row, r) {
                (RowClass::Unconstrained, _) | (_, RowClass::Unconstrained) => {
                    RowClass::Unconstrained
                }
                (RowClass::AmOppw, _) | (_, RowClass::AmOppw) => RowClass::AmOppw,
                _ => RowClass::Oppw,
            };
            col = match (col, c) {
                (ColClass::Unconstrained, _) | (_, ColClass::Unconstrained) => {
                    ColClass::Unconstrained
                }
                (ColClass::AmOppts, _) | (_, ColClass::AmOppts) => ColClass::AmOppts,
                _ => ColClass::Oppts,
            };
        }
        match (row, col) {
            (RowClass::Oppw, _) => StructureClass::Oppw,
            (RowClass::AmOppw, _) => StructureClass::AmOppw,
            (_, ColClass::Oppts) => StructureClass::Oppts,
            (_, ColClass::AmOppts) => StructureClass::AmOppts,
            _ => StructureClass::Unrestricted,
        }
    }
}

/// Exact MCP of a list of matrices sharing time length `t`.
///
/// Uses the shift histogram per (auto or unordered cross) pair; correlation
/// symmetry corr(A,B,tau) = corr(B,A,T-tau) makes one direction per pair
/// sufficient.
pub fn certify_mcp(matrices: &[CodeMatrix], t: u32) -> Result<u32> {
    if matrices.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let mut mcp = 0;
    for (i, a) in matrices.iter().enumerate() {
        let auto = correlation_histogram(a, a, t);
        for &v in &auto[1..] {
            mcp = mcp.max(v);
        }
        for b in &matrices[i + 1..] {
            let cross = correlation_histogram(a, b, t);
            for &v in &cross {
                mcp = mcp.max(v);
            }
        }
    }
    Ok(mcp)
}

/// Outcome of checking a family against its declared parameters.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub size: usize,
    pub weight_failures: Vec<(usize, u32)>,
    pub duplicate_pairs: Vec<(usize, usize)>,
    pub certified_mcp: Option<u32>,
    pub claimed_kappa: u32,
    pub structure: StructureClass,
}

impl VerificationReport {
    pub fn mcp_ok(&self) -> bool {
        match self.certified_mcp {
            Some(mcp) => mcp <= self.claimed_kappa,
            None => false,
        }
    }

    pub fn passed(&self) -> bool {
        self.weight_failures.is_empty() && self.duplicate_pairs.is_empty() && self.mcp_ok()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "size: {}", self.size)?;
        if self.weight_failures.is_empty() {
            writeln!(f, "constant weight: ok")?;
        } else {
            writeln!(
                f,
                "constant weight: FAILED for matrices {:?}",
                self.weight_failures
            )?;
        }
        if self.duplicate_pairs.is_empty() {
            writeln!(f, "pairwise distinct: ok")?;
        } else {
            writeln!(f, "pairwise distinct: FAILED, duplicates {:?}", self.duplicate_pairs)?;
        }
        match self.certified_mcp {
            Some(mcp) => writeln!(
                f,
                "certified MCP {} vs claimed kappa {}: {}",
                mcp,
                self.claimed_kappa,
                if self.mcp_ok() { "ok" } else { "FAILED" }
            )?,
            None => writeln!(f, "MCP: not certified (empty family)")?,
        }
        write!(f, "structure: {}", self.structure)
    }
}

/// Full verification pass. Failures are report entries, never errors.
pub fn verify_family(family: &CodeFamily) -> VerificationReport {
    let matrices = family.matrices();
    let weight_failures: Vec<(usize, u32)> = matrices
        .iter()
        .enumerate()
        .filter(|(_, m)| m.weight() != family.params.omega)
        .map(|(i, m)| (i, m.weight()))
        .collect();
    let mut duplicate_pairs = Vec::new();
    let mut seen: BTreeMap<&[(u32, u32)], usize> = BTreeMap::new();
    for (i, m) in matrices.iter().enumerate() {
        if let Some(&j) = seen.get(m.pulses()) {
            duplicate_pairs.push((j, i));
        } else {
            seen.insert(m.pulses(), i);
        }
    }
    let certified_mcp = certify_mcp(matrices, family.params.t).ok();
    VerificationReport {
        size: matrices.len(),
        weight_failures,
        duplicate_pairs,
        certified_mcp,
        claimed_kappa: family.params.kappa,
        structure: family.structure_class(),
    }
}
