//! Cost function, dyadic sub-budgets and the terminal index.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Relative slack so exact values such as `c(2) = 8` do not floor to 7.
const FLOOR_SLACK: f64 = 1e-12;

/// `c(m) = (1 - beta)^beta (N / m)^beta`.
pub fn cost(m: usize, n: usize, beta: f64) -> Result<f64> {
    if m == 0 || n == 0 || !(beta > 0.0 && beta < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "cost needs m >= 1, N >= 1, 0 < beta < 1 (m = {m}, N = {n}, beta = {beta})"
        )));
    }
    Ok((1.0 - beta).powf(beta) * (n as f64 / m as f64).powf(beta))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    /// Block `(2^(nu-1), 2^nu]`; block 0 is `{1}`.
    pub nu: u32,
    pub m_nu: usize,
}

impl Block {
    pub fn range(&self) -> (usize, usize) {
        if self.nu == 0 {
            (1, 1)
        } else {
            ((1 << (self.nu - 1)) + 1, 1 << self.nu)
        }
    }

    pub fn len(&self) -> usize {
        let (a, b) = self.range();
        b + 1 - a
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BudgetPlan {
    pub n_total: usize,
    pub beta: f64,
    pub n0: usize,
    pub m_star: usize,
    pub blocks: Vec<Block>,
}

impl BudgetPlan {
    /// Sub-budget `N(n)` for `1 <= n <= m*`.
    pub fn sub_budget(&self, n: usize) -> Option<usize> {
        if n == 0 || n > self.m_star {
            return None;
        }
        let nu = usize::BITS - (n - 1).leading_zeros();
        self.blocks.iter().find(|b| b.nu == nu).map(|b| b.m_nu)
    }

    /// `N(1), ..., N(m*)`.
    pub fn sequence(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.m_star);
        for b in &self.blocks {
            out.extend(std::iter::repeat_n(b.m_nu, b.len()));
        }
        out
    }

    pub fn spend(&self) -> usize {
        self.blocks.iter().map(|b| b.m_nu * b.len()).sum()
    }
}

/// Largest power of two not exceeding `(1 - beta) N / N0^(1/beta)`.
pub fn terminal_index(n: usize, beta: f64, n0: usize) -> usize {
    let bound = (1.0 - beta) * n as f64 / (n0 as f64).powf(1.0 / beta);
    if bound < 1.0 {
        return 0;
    }
    let mut m = 1usize;
    while ((m * 2) as f64) <= bound * (1.0 + FLOOR_SLACK) {
        m *= 2;
    }
    m
}

pub fn sub_budgets(n: usize, beta: f64, n0: usize) -> Result<BudgetPlan> {
    cost(1, n.max(1), beta)?;
    if n0 == 0 {
        return Err(Error::InvalidParameter("N0 must be >= 1".into()));
    }
    let m_star = terminal_index(n, beta, n0);
    if m_star == 0 {
        return Err(Error::EmptyPlan(n));
    }
    let levels = m_star.trailing_zeros();
    let blocks = (0..=levels)
        .map(|nu| {
            let c = cost(1 << nu, n, beta)?;
            Ok(Block {
                nu,
                m_nu: (c * (1.0 + FLOOR_SLACK)).floor() as usize,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BudgetPlan {
        n_total: n,
        beta,
        n0,
        m_star,
        blocks,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanReport {
    pub pass: bool,
    pub violation: Option<String>,
}

pub fn validate_plan(plan: &BudgetPlan) -> PlanReport {
    let fail = |s: String| PlanReport {
        pass: false,
        violation: Some(s),
    };
    if !plan.m_star.is_power_of_two() {
        return fail(format!("terminal index {} is not a power of two", plan.m_star));
    }
    let levels = plan.m_star.trailing_zeros();
    if plan.blocks.len() != levels as usize + 1
        || plan.blocks.iter().enumerate().any(|(i, b)| b.nu != i as u32)
    {
        return fail("blocks do not cover 1..=m* exactly".into());
    }
    for w in plan.blocks.windows(2) {
        if w[1].m_nu > w[0].m_nu {
            return fail(format!(
                "monotonicity: block {} budget {} exceeds block {} budget {}",
                w[1].nu, w[1].m_nu, w[0].nu, w[0].m_nu
            ));
        }
    }
    if let Some(b) = plan.blocks.iter().find(|b| b.m_nu < plan.n0) {
        return fail(format!("minimum: block {} budget {} below N0 = {}", b.nu, b.m_nu, plan.n0));
    }
    let spend = plan.spend();
    if spend > plan.n_total {
        return fail(format!("overspend: {spend} > {}", plan.n_total));
    }
    let bound = (1.0 - plan.beta) * plan.n_total as f64 / (plan.n0 as f64).powf(1.0 / plan.beta);
    if plan.m_star as f64 > bound * (1.0 + FLOOR_SLACK) {
        return fail(format!("terminal index {} exceeds {bound}", plan.m_star));
    }
    PlanReport {
        pass: true,
        violation: None,
    }
}
