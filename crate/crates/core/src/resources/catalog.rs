//! Cost models of prior adders and of the proposed designs, and the savings
//! percentages derived from them.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use thiserror::Error;

use crate::arith::{floor_log2, hamming_weight};
use crate::builders::DesignId;

/// Exact rational used for every cost and percentage.
pub type Q = Ratio<i128>;

/// Basis terms of a cost expression.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Cube,
    Square,
    N,
    /// `w(n)`
    Weight,
    /// `w(n-1)`
    WeightPrev,
    /// `⌊log₂ n⌋`
    Log,
    /// `⌊log₂(n-1)⌋`
    LogPrev,
    One,
}

impl Term {
    fn value(self, n: u64) -> Option<i128> {
        let prev = n.checked_sub(1).filter(|&p| p >= 1);
        Some(match self {
            Term::Cube => (n as i128).pow(3),
            Term::Square => (n as i128).pow(2),
            Term::N => n as i128,
            Term::Weight => hamming_weight(n) as i128,
            Term::WeightPrev => hamming_weight(prev?) as i128,
            Term::Log => floor_log2(n)? as i128,
            Term::LogPrev => floor_log2(prev?)? as i128,
            Term::One => 1,
        })
    }
}

/// A linear combination of [`Term`]s with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CostForm {
    terms: Vec<(Term, Q)>,
}

impl CostForm {
    fn int(terms: &[(Term, i128)]) -> Self {
        CostForm {
            terms: terms
                .iter()
                .map(|&(t, c)| (t, Q::from_integer(c)))
                .collect(),
        }
    }

    fn rational(terms: &[(Term, i128, i128)]) -> Self {
        CostForm {
            terms: terms
                .iter()
                .map(|&(t, num, den)| (t, Q::new(num, den)))
                .collect(),
        }
    }

    pub fn terms(&self) -> &[(Term, Q)] {
        &self.terms
    }

    /// Exact value at `n`; `None` when a term is undefined there (e.g.
    /// `w(n-1)` at `n = 1`).
    pub fn evaluate(&self, n: u64) -> Option<Q> {
        self.terms
            .iter()
            .try_fold(Q::from_integer(0), |acc, &(t, c)| {
                Some(acc + c * t.value(n)?)
            })
    }

    /// Coefficient of `n` when that is the highest-order term.
    pub fn leading_linear(&self) -> Option<Q> {
        let coef = |term| {
            self.terms
                .iter()
                .filter(|(t, _)| *t == term)
                .map(|&(_, c)| c)
                .sum::<Q>()
        };
        if coef(Term::Cube) != Q::from_integer(0) || coef(Term::Square) != Q::from_integer(0) {
            return None;
        }
        Some(coef(Term::N))
    }
}

/// Prior adders in the comparison tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Work {
    DraperOut,
    TrisetyarsoOut,
    ThapliyalOut,
    BabuOut,
    LisaOut,
    DraperIn,
    TrisetyarsoIn,
    ThapliyalIn,
    Takahashi08,
    Takahashi10,
    Cheng,
    Mogensen1,
    Mogensen2,
}

impl Work {
    pub const ALL: [Work; 13] = [
        Work::DraperOut,
        Work::TrisetyarsoOut,
        Work::ThapliyalOut,
        Work::BabuOut,
        Work::LisaOut,
        Work::DraperIn,
        Work::TrisetyarsoIn,
        Work::ThapliyalIn,
        Work::Takahashi08,
        Work::Takahashi10,
        Work::Cheng,
        Work::Mogensen1,
        Work::Mogensen2,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Work::DraperOut => "Draper-out",
            Work::TrisetyarsoOut => "Trisetyarso-out",
            Work::ThapliyalOut => "Thapliyal-out",
            Work::BabuOut => "Babu-out",
            Work::LisaOut => "Lisa-out",
            Work::DraperIn => "Draper-in",
            Work::TrisetyarsoIn => "Trisetyarso-in",
            Work::ThapliyalIn => "Thapliyal-in",
            Work::Takahashi08 => "Takahashi08",
            Work::Takahashi10 => "Takahashi10",
            Work::Cheng => "Cheng",
            Work::Mogensen1 => "Mogensen1",
            Work::Mogensen2 => "Mogensen2",
        }
    }

    pub fn is_in_place(self) -> bool {
        !matches!(
            self,
            Work::DraperOut
                | Work::TrisetyarsoOut
                | Work::ThapliyalOut
                | Work::BabuOut
                | Work::LisaOut
        )
    }

    pub fn model(self) -> CostModel {
        use Term::*;
        let draper_q = CostForm::int(&[(N, 4), (Weight, -1), (Log, -1), (One, 1)]);
        let (t, qubits, approximate, note) = match self {
            Work::DraperOut | Work::TrisetyarsoOut => (
                CostForm::int(&[(N, 35), (Weight, -21), (Log, -21), (One, -7)]),
                draper_q,
                false,
                None,
            ),
            Work::ThapliyalOut => (
                CostForm::int(&[(N, 35), (One, -14)]),
                CostForm::int(&[(N, 4), (One, 1)]),
                false,
                None,
            ),
            Work::BabuOut => (
                CostForm::int(&[(N, 54)]),
                CostForm::int(&[(N, 12), (One, 1)]),
                false,
                None,
            ),
            Work::LisaOut => (
                CostForm::int(&[(N, 26)]),
                CostForm::int(&[(N, 6), (One, 1)]),
                false,
                None,
            ),
            Work::DraperIn | Work::TrisetyarsoIn => (
                CostForm::int(&[
                    (N, 70),
                    (Weight, -21),
                    (Log, -21),
                    (WeightPrev, -21),
                    (LogPrev, -21),
                    (One, -49),
                ]),
                draper_q,
                false,
                None,
            ),
            Work::ThapliyalIn => (
                CostForm::rational(&[(N, 203, 4), (One, -28, 1)]),
                CostForm::int(&[(N, 4), (One, 1)]),
                false,
                None,
            ),
            Work::Takahashi08 => (
                CostForm::int(&[(N, 196)]),
                CostForm::int(&[(N, 5)]),
                true,
                None,
            ),
            Work::Takahashi10 => (
                CostForm::int(&[(N, 49)]),
                CostForm::int(&[(N, 5)]),
                true,
                None,
            ),
            Work::Cheng => (
                CostForm::rational(&[(Cube, 14, 6), (Square, 21, 6), (N, -49, 6)]),
                CostForm::int(&[(N, 3), (One, 1)]),
                false,
                None,
            ),
            Work::Mogensen1 => (
                CostForm::int(&[(N, 84), (One, -56)]),
                CostForm::int(&[(N, 3), (One, -1)]),
                true,
                None,
            ),
            Work::Mogensen2 => (
                CostForm::int(&[(N, 84), (One, -56)]),
                CostForm::int(&[(N, 3), (Log, -1), (One, -1)]),
                true,
                Some("qubit form printed as log(n) without a floor; evaluated as ⌊log₂ n⌋"),
            ),
        };
        CostModel {
            label: self.label().to_string(),
            t,
            qubits,
            approximate,
            min_n: if self.is_in_place() { 2 } else { 1 },
            note,
        }
    }
}

impl fmt::Display for Work {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Work {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Work::ALL
            .into_iter()
            .find(|w| w.label().eq_ignore_ascii_case(s))
            .ok_or_else(|| CatalogError::Unknown(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CostModel {
    pub label: String,
    pub t: CostForm,
    pub qubits: CostForm,
    /// Printed with "≈"; evaluated as if exact.
    pub approximate: bool,
    pub min_n: u64,
    pub note: Option<&'static str>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error("unknown catalog entry `{0}`")]
    Unknown(String),
    #[error("{label} is not defined at n = {n}")]
    Domain { label: String, n: u64 },
}

/// Every prior work, in table order.
pub fn catalog() -> Vec<CostModel> {
    Work::ALL.iter().map(|w| w.model()).collect()
}

/// Summary-table cost model of a proposed design.
pub fn design_model(design: DesignId) -> CostModel {
    use Term::*;
    let t = match design {
        DesignId::OutFtQcla1 => CostForm::int(&[(N, 16), (Weight, -8), (Log, -8), (One, -4)]),
        DesignId::OutFtQcla2 => CostForm::int(&[(N, 22), (Weight, -11), (Log, -11), (One, -7)]),
        DesignId::InFtQcla1 => CostForm::int(&[
            (N, 20),
            (Weight, -8),
            (WeightPrev, -8),
            (Log, -4),
            (LogPrev, -4),
            (One, -8),
        ]),
        DesignId::InFtQcla2 => CostForm::int(&[
            (N, 40),
            (Weight, -11),
            (Log, -11),
            (WeightPrev, -11),
            (LogPrev, -11),
            (One, -32),
        ]),
    };
    let qubits = if design.uses_and_pairs() {
        CostForm::int(&[(N, 6), (Weight, -2), (Log, -2)])
    } else {
        CostForm::int(&[(N, 4), (Weight, -1), (Log, -1), (One, 1)])
    };
    CostModel {
        label: design.label().to_string(),
        t,
        qubits,
        approximate: false,
        min_n: design.min_formula_width(),
        note: None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogCost {
    pub t: Q,
    pub qubits: Q,
    pub approximate: bool,
}

/// Evaluate a catalog entry by label, e.g. `"Thapliyal-in"`.
pub fn catalog_cost(label: &str, n: u64) -> Result<CatalogCost, CatalogError> {
    let model = label.parse::<Work>()?.model();
    let domain = || CatalogError::Domain {
        label: model.label.clone(),
        n,
    };
    if n < model.min_n {
        return Err(domain());
    }
    Ok(CatalogCost {
        t: model.t.evaluate(n).ok_or_else(domain)?,
        qubits: model.qubits.evaluate(n).ok_or_else(domain)?,
        approximate: model.approximate,
    })
}

/// Baselines a design is compared against, duplicates included.
pub fn baselines(design: DesignId) -> Vec<Work> {
    if design.is_in_place() {
        vec![
            Work::Takahashi08,
            Work::Takahashi10,
            Work::Mogensen1,
            Work::Mogensen2,
            Work::DraperIn,
            Work::TrisetyarsoIn,
            Work::ThapliyalIn,
        ]
    } else {
        vec![
            Work::BabuOut,
            Work::LisaOut,
            Work::DraperOut,
            Work::TrisetyarsoOut,
            Work::ThapliyalOut,
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SavingsResult {
    /// `100·(1 − lead_new/lead_baseline)`, exact.
    Percent(Q),
    /// The baseline grows faster than linearly; no single percentage.
    AsymptoticDominance,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SavingsFigure {
    pub design: DesignId,
    pub baseline: Work,
    pub result: SavingsResult,
}

impl SavingsFigure {
    pub fn percent(&self) -> Option<Q> {
        match self.result {
            SavingsResult::Percent(p) => Some(p),
            SavingsResult::AsymptoticDominance => None,
        }
    }

    pub fn rendered(&self) -> String {
        match self.percent() {
            Some(p) => percent_string(p),
            None => "asymptotic-dominance".to_string(),
        }
    }
}

/// Round half up to two decimals.
pub fn round_percent(p: Q) -> Q {
    let hundred = Q::from_integer(100);
    ((p * hundred) + Q::new(1, 2)).floor() / hundred
}

/// Two-decimal rendering, half up.
pub fn percent_string(p: Q) -> String {
    let cents = (round_percent(p) * Q::from_integer(100)).to_integer();
    let sign = if cents < 0 { "-" } else { "" };
    format!("{sign}{}.{:02}", cents.abs() / 100, cents.abs() % 100)
}

/// T-count savings of `design` over `baseline` from leading coefficients.
pub fn savings(design: DesignId, baseline: Work) -> SavingsFigure {
    let new = design_model(design)
        .t
        .leading_linear()
        .expect("designs are linear");
    let result = match baseline.model().t.leading_linear() {
        Some(base) => {
            SavingsResult::Percent(Q::from_integer(100) * (Q::from_integer(1) - new / base))
        }
        None => SavingsResult::AsymptoticDominance,
    };
    SavingsFigure {
        design,
        baseline,
        result,
    }
}

/// Savings from the full cost expressions at a concrete `n`.
pub fn savings_at(design: DesignId, baseline: Work, n: u64) -> Option<Q> {
    let new = design_model(design).t.evaluate(n)?;
    let base = baseline.model().t.evaluate(n)?;
    Some(Q::from_integer(100) * (Q::from_integer(1) - new / base))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Averaging {
    /// Mean of the exact percentages over every baseline, duplicates
    /// included.
    ExactMean,
    /// Mean of the two-decimal figures.
    MeanOfRounded,
    /// Baselines with identical T forms counted once.
    DistinctForms,
}

pub fn savings_average(design: DesignId) -> Q {
    savings_average_with(design, Averaging::ExactMean)
}

pub fn savings_average_with(design: DesignId, averaging: Averaging) -> Q {
    let mut works = baselines(design);
    if averaging == Averaging::DistinctForms {
        let mut seen: Vec<CostForm> = Vec::new();
        works.retain(|w| {
            let form = w.model().t;
            let fresh = !seen.contains(&form);
            seen.push(form);
            fresh
        });
    }
    let figures: Vec<Q> = works
        .iter()
        .filter_map(|&w| savings(design, w).percent())
        .map(|p| {
            if averaging == Averaging::MeanOfRounded {
                round_percent(p)
            } else {
                p
            }
        })
        .collect();
    figures.iter().sum::<Q>() / Q::from_integer(figures.len() as i128)
}
