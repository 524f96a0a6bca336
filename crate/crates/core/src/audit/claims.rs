use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::group::ElemId;

macro_rules! claims {
    ($($id:ident => $legend:expr),* $(,)?) => {
        /// Catalog of audited statements.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        #[allow(non_camel_case_types)]
        pub enum ClaimId {
            $($id),*
        }

        impl ClaimId {
            pub const ALL: &'static [ClaimId] = &[$(ClaimId::$id),*];

            pub fn tag(self) -> &'static str {
                match self {
                    $(ClaimId::$id => stringify!($id)),*
                }
            }

            /// How the statement is read by the checker.
            pub fn legend(self) -> &'static str {
                match self {
                    $(ClaimId::$id => $legend),*
                }
            }
        }
    };
}

claims! {
    R1a => "p_g(H,K) = 0 iff g is not a commutator value; variant identity: p_1 = 1 iff [nH,mK] = 1",
    R1b => "the p_g over all g form a probability distribution",
    P1 => "p_(e,f)(AxC, BxD) = p_e(A,B) p_f(C,D); A,B <= E and C,D <= F, pairs taken coordinatewise",
    P2a => "written reading: p^(n,m)_g(H,K) = p^(n,m)_{g^-1}(K,H); variants normal_*: equalities when H or K is normal",
    P2b => "index-swapped reading: p^(n,m)_g(H,K) = p^(m,n)_{g^-1}(K,H); variants normal_*: swapped analogues",
    P3_m1 => "class formula with m = 1 equals the exact count; variant derived (wg in Cl_K(w)) is a hard guarantee, variant paper uses g^-1 w in Cl_K(w)",
    P3_mgt1 => "class formula with m >= 2 against the exact count, both predicates",
    C4 => "if C_K(w) = 1 for every non-identity x-block value w, then p_1 = 1/|H|^n + 1/|K|^m - 1/(|H|^n |K|^m)",
    FROB_BOUND => "p_g^(1,1)(H,G) <= |G:H| d(G), with equality iff every irreducible vanishes off H",
    ZETA_CHAR => "zeta^(n,m)(g) counted over H^n x G^m is a character of G when it is a class function",
    P4 => "H <= K implies p_g(H,G) >= p_g(K,G); variant equality_iff: equality iff Cl_H(x) = Cl_K(x) for all x",
    P5 => "N normal, H <= N: p_g(H,G) <= p_gN(H/N,G/N) with g mapped to its coset; equality when N meets [nH,mG] trivially; variant special_case: H = G",
    T2_CHAIN => "p_g(G,G) <= p_g(H,K) <= p_1(H,K) <= p_1(H,G) <= p_1(H,H); one variant per link",
    C5 => "Z(G) = 1 implies p^(n,1)_g(H,K) <= (2^n - 1)/2^n; variant center_of_h uses Z(H) = 1",
    T3i => "p_g(H,K) <= (2p^n + p - 2)/p^(m+n), p the smallest prime dividing |G|",
    T3ii => "p_g(H,K) >= ((1-p)|Y| + p|H|^n)/(|H|^n |K|^m) - (|K| + p)|C_H(K)|^n/(|H|^n |K|^m), Y the x-tuples with C_K([x]) = 1",
    C6 => "if some g attains the bound of T3i then |H:C_H(K)|^n <= (p^(n+1) - p^3 - p^2/2 + p)/(2p^2 + p - 2)",
    EQ3 => "p_g(G) = (1/|G|) sum chi(g)/chi(1) within 1e-8 for every g",
    EQ4 => "number of irreducibles = number of classes and d(G) = k(G)/|G|",
    EQ7 => "for normal H: p_g(H,G) = (1/(|H||G|)) sum |H| <chi_H,chi_H>/chi(1) chi(g) within 1e-8",
    PSI => "psi(g) = #{[x,y] = g} decomposes with multiplicity |G|/chi(1) within 1e-6",
}

impl ClaimId {
    pub fn is_hard_guarantee(self, variant: Option<&str>) -> bool {
        match self {
            ClaimId::EQ3 | ClaimId::EQ4 | ClaimId::EQ7 | ClaimId::PSI => true,
            ClaimId::P3_m1 => variant == Some("derived"),
            _ => false,
        }
    }
}

impl fmt::Display for ClaimId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for ClaimId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        ClaimId::ALL
            .iter()
            .copied()
            .find(|c| c.tag().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::ConfigInvalid(format!("unknown claim `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Violated,
    Vacuous,
    PreconditionFailed,
}

/// The comparison behind a verdict: `lhs relation rhs` is what the claim
/// asserts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub lhs: String,
    pub rhs: String,
    pub relation: String,
}

impl Witness {
    pub fn new(lhs: impl ToString, relation: &str, rhs: impl ToString) -> Self {
        Self { lhs: lhs.to_string(), rhs: rhs.to_string(), relation: relation.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub group: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<ElemId>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extra: BTreeMap<String, String>,
}

impl Instance {
    pub fn group(spec: &str) -> Self {
        Self { group: spec.into(), h: None, k: None, n: None, m: None, g: None, extra: BTreeMap::new() }
    }

    pub fn with_h(mut self, h: &str) -> Self {
        self.h = Some(h.into());
        self
    }

    pub fn with_k(mut self, k: &str) -> Self {
        self.k = Some(k.into());
        self
    }

    pub fn with_weights(mut self, n: usize, m: usize) -> Self {
        self.n = Some(n);
        self.m = Some(m);
        self
    }

    pub fn with_g(mut self, g: ElemId) -> Self {
        self.g = Some(g);
        self
    }

    pub fn with_extra(mut self, key: &str, value: impl ToString) -> Self {
        self.extra.insert(key.into(), value.to_string());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub claim: ClaimId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
    pub instance: Instance,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub runtime_ms: Option<u64>,
}

impl Finding {
    pub fn new(claim: ClaimId, variant: Option<&str>, instance: Instance, verdict: Verdict) -> Self {
        Self {
            claim,
            variant: variant.map(Into::into),
            instance,
            verdict,
            witness: None,
            note: None,
            runtime_ms: None,
        }
    }

    /// `holds` or `violated` according to `ok`, with the comparison attached.
    pub fn judged(claim: ClaimId, variant: Option<&str>, instance: Instance, ok: bool, witness: Witness) -> Self {
        let verdict = if ok { Verdict::Holds } else { Verdict::Violated };
        Self { witness: Some(witness), ..Self::new(claim, variant, instance, verdict) }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// `TAG` or `TAG[variant]`.
    pub fn key(&self) -> String {
        match &self.variant {
            Some(v) => format!("{}[{v}]", self.claim),
            None => self.claim.to_string(),
        }
    }

    pub fn is_hard_guarantee(&self) -> bool {
        self.claim.is_hard_guarantee(self.variant.as_deref())
    }

    /// Same claim, variant and instance; witness and timing may differ.
    pub fn same_subject(&self, other: &Finding) -> bool {
        self.claim == other.claim && self.variant == other.variant && self.instance == other.instance
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictCounts {
    pub holds: usize,
    pub violated: usize,
    pub vacuous: usize,
    pub precondition_failed: usize,
}

impl VerdictCounts {
    pub fn add(&mut self, v: Verdict) {
        match v {
            Verdict::Holds => self.holds += 1,
            Verdict::Violated => self.violated += 1,
            Verdict::Vacuous => self.vacuous += 1,
            Verdict::PreconditionFailed => self.precondition_failed += 1,
        }
    }
}
