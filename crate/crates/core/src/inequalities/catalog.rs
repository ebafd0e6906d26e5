use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::GeomError;

/// Theorem and corollary identifiers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TheoremId {
    T1,
    T2,
    T3,
    T4,
    T5,
    T6,
    T7,
    T8a,
    T8b,
    C1a,
    C1b,
    T9a,
    T9b,
    C2a,
    C2b,
    T10,
    T11,
    T12,
    T13,
    C3,
}

impl TheoremId {
    pub const ALL: [TheoremId; 20] = [
        Self::T1,
        Self::T2,
        Self::T3,
        Self::T4,
        Self::T5,
        Self::T6,
        Self::T7,
        Self::T8a,
        Self::T8b,
        Self::C1a,
        Self::C1b,
        Self::T9a,
        Self::T9b,
        Self::C2a,
        Self::C2b,
        Self::T10,
        Self::T11,
        Self::T12,
        Self::T13,
        Self::C3,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::T1 => "T1",
            Self::T2 => "T2",
            Self::T3 => "T3",
            Self::T4 => "T4",
            Self::T5 => "T5",
            Self::T6 => "T6",
            Self::T7 => "T7",
            Self::T8a => "T8a",
            Self::T8b => "T8b",
            Self::C1a => "C1a",
            Self::C1b => "C1b",
            Self::T9a => "T9a",
            Self::T9b => "T9b",
            Self::C2a => "C2a",
            Self::C2b => "C2b",
            Self::T10 => "T10",
            Self::T11 => "T11",
            Self::T12 => "T12",
            Self::T13 => "T13",
            Self::C3 => "C3",
        }
    }

    /// Whether the statement involves a single unit vector `U` or `X`.
    pub fn is_single_vector(self) -> bool {
        matches!(self, Self::T1 | Self::T3 | Self::T5 | Self::T6 | Self::T7)
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = GeomError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|id| id.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| GeomError::UnknownTheorem(s.to_string()))
    }
}

/// `Ge`: `lhs ≥ rhs`. `Le`: `lhs ≤ rhs`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Ge,
    Le,
}

impl Direction {
    pub fn slack(self, lhs: f64, rhs: f64) -> f64 {
        match self {
            Self::Ge => lhs - rhs,
            Self::Le => rhs - lhs,
        }
    }
}

/// Hypothesis a statement places on the submersion beyond anti-invariance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Requirement {
    None,
    TotallyGeodesicFibers,
    IntegrableHorizontal,
}

/// The stated condition for equality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EqualityCondition {
    TotallyGeodesic,
    HorizontalIntegrable,
    ChenVertical,
    ChenHorizontal,
    UmbilicalDiag,
    NormBalanceTH,
    NormBalanceTV,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CatalogEntry {
    pub id: TheoremId,
    pub direction: Direction,
    pub requires: Requirement,
    pub equality: EqualityCondition,
    /// Whether `δ(N)` enters, which relaxes the slack tolerance.
    pub uses_delta: bool,
    /// Human-readable statement, `lhs ⋛ rhs`.
    pub statement: &'static str,
}

/// All theorem and corollary entries, each exactly once.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremCatalog {
    pub entries: Vec<CatalogEntry>,
}

impl TheoremCatalog {
    pub fn standard() -> Self {
        use Direction::{Ge, Le};
        use EqualityCondition as E;
        use Requirement as Q;
        let e = |id, direction, requires, equality, uses_delta, statement| CatalogEntry {
            id,
            direction,
            requires,
            equality,
            uses_delta,
            statement,
        };
        Self {
            entries: vec![
                e(TheoremId::T1, Ge, Q::None, E::TotallyGeodesic, false, "R̂ic(U) ≥ c/4(r−1) − r·g(𝒯_U U, H)"),
                e(TheoremId::T2, Ge, Q::None, E::TotallyGeodesic, false, "τ̂ ≥ c/4·r(r−1) − r²|H|²"),
                e(TheoremId::T3, Le, Q::None, E::HorizontalIntegrable, false, "Ric*(X) ≤ c/4((ℓ−1) + 3Σ_α|C_αX|²)"),
                e(TheoremId::T4, Le, Q::None, E::HorizontalIntegrable, false, "τ* ≤ c/4(ℓ(ℓ−1) + 3Σ_iΣ_α|C_αX_i|²)"),
                e(TheoremId::T5, Ge, Q::None, E::ChenVertical, false, "R̂ic(U₁) ≥ c/4(r−1) − ¼r²|H|²"),
                e(TheoremId::T6, Le, Q::None, E::ChenHorizontal, false, "2Ric*(X₁) ≤ c/4(2(ℓ−1) + 3Σ_α|C_αX₁|²)"),
                e(
                    TheoremId::T7,
                    Le,
                    Q::None,
                    E::ChenVertical,
                    true,
                    "c/4(ℓr+ℓ+r+Σ_α(Σ_i|B_αX_i|² + 3|C_αX₁|²)) ≤ R̂ic(U₁) + Ric*(X₁) + ¼r²|H|² + 3Σ_βΣ_{s≥2}(𝒜_1s^β)² − δ(N) + |𝒯^𝒱|² − |𝒜^ℋ|²",
                ),
                e(TheoremId::T8a, Le, Q::None, E::HorizontalIntegrable, true, "τ̂+τ* ≤ K − r²|H|² + |𝒯^ℋ|² + 2δ(N) − 2|𝒯^𝒱|² + 2|𝒜^ℋ|²"),
                e(TheoremId::T8b, Ge, Q::None, E::HorizontalIntegrable, true, "τ̂+τ* ≥ K − r²|H|² + |𝒯^ℋ|² − 3|𝒜^𝒱|² + 2δ(N) − 2|𝒯^𝒱|²"),
                e(TheoremId::C1a, Le, Q::TotallyGeodesicFibers, E::HorizontalIntegrable, false, "τ̂+τ* ≤ K + 2|𝒜^ℋ|²"),
                e(TheoremId::C1b, Ge, Q::TotallyGeodesicFibers, E::HorizontalIntegrable, false, "τ̂+τ* ≥ K − 3|𝒜^𝒱|²"),
                e(TheoremId::T9a, Ge, Q::None, E::TotallyGeodesic, true, "τ̂+τ* ≥ K − r²|H|² + 2δ(N) − 2|𝒯^𝒱|² + 2|𝒜^ℋ|² − 3|𝒜^𝒱|²"),
                e(TheoremId::T9b, Le, Q::None, E::TotallyGeodesic, true, "τ̂+τ* ≤ K − r²|H|² + |𝒯^ℋ|² + 2δ(N) + 2|𝒜^ℋ|² − 3|𝒜^𝒱|²"),
                e(TheoremId::C2a, Ge, Q::IntegrableHorizontal, E::TotallyGeodesic, true, "τ̂+τ* ≥ K − r²|H|² + 2δ(N) − 2|𝒯^𝒱|²"),
                e(TheoremId::C2b, Le, Q::IntegrableHorizontal, E::TotallyGeodesic, true, "τ̂+τ* ≤ K − r²|H|² + 2δ(N) + |𝒯^ℋ|²"),
                e(TheoremId::T10, Le, Q::None, E::NormBalanceTH, true, "K ≤ τ̂+τ* + r²|H|² + 2|𝒯^𝒱|² + 3|𝒜^𝒱|² − 2δ(N) − 2√2|𝒜^ℋ||𝒯^ℋ|"),
                e(TheoremId::T11, Ge, Q::None, E::NormBalanceTV, true, "K ≥ τ̂+τ* + r²|H|² − |𝒯^ℋ|² − 2δ(N) − 2|𝒜^ℋ|² + 2√6|𝒜^𝒱||𝒯^𝒱|"),
                e(TheoremId::T12, Le, Q::None, E::UmbilicalDiag, true, "K ≤ τ̂+τ* + r(r−1)|H|² + 3|𝒜^𝒱|² − 2δ(N) + 2|𝒯^𝒱|² − 2|𝒜^ℋ|²"),
                e(TheoremId::T13, Ge, Q::None, E::HorizontalIntegrable, true, "K ≥ τ̂+τ* + r²|H|² − |𝒯^ℋ|² + (3/ℓ)tr(𝒜^𝒱)² − 2δ(N) + 2|𝒯^𝒱|² − 2|𝒜^ℋ|²"),
                e(TheoremId::C3, Ge, Q::TotallyGeodesicFibers, E::HorizontalIntegrable, false, "K ≥ τ̂+τ* + (3/ℓ)tr(𝒜^𝒱)² − 2|𝒜^ℋ|²"),
            ],
        }
    }

    pub fn get(&self, id: TheoremId) -> &CatalogEntry {
        self.entries.iter().find(|e| e.id == id).expect("catalog covers every id")
    }
}
