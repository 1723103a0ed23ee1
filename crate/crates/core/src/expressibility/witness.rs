use std::collections::BTreeMap;

use crate::decide::{decide, Equation, QuasiQuery, Verdict};
use crate::formula::Formula;

use super::ExprError;

/// Data for a parametric definition of `target`: with fresh variables
/// `output` (π) and `aux` (π₁..π_l), the equation `target = π` must be
/// equivalent to the conjunction of `pairs` (B_j = C_j), where the forward
/// direction additionally instantiates each `aux[k]` with `substitutions[k]`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ParametricWitness {
    pub target: Formula,
    pub output: String,
    pub aux: Vec<String>,
    pub pairs: Vec<(Formula, Formula)>,
    pub substitutions: Vec<Formula>,
}

impl ParametricWitness {
    fn validate(&self) -> Result<(), ExprError> {
        if self.aux.len() != self.substitutions.len() {
            return Err(ExprError::AuxMismatch {
                vars: self.aux.len(),
                terms: self.substitutions.len(),
            });
        }
        let used = self.target.free_vars();
        match std::iter::once(&self.output)
            .chain(&self.aux)
            .find(|v| used.contains(*v))
        {
            Some(v) => Err(ExprError::NotFresh(v.clone())),
            None => Ok(()),
        }
    }

    /// `(target = π) ⟹ ∧ (B_j = C_j)[π_k / D_k]`
    pub fn forward_query(&self) -> Result<QuasiQuery, ExprError> {
        self.validate()?;
        let bindings: BTreeMap<String, Formula> = self
            .aux
            .iter()
            .cloned()
            .zip(self.substitutions.iter().cloned())
            .collect();
        Ok(QuasiQuery::new(
            vec![self.defining_equation()],
            self.pairs
                .iter()
                .map(|(b, c)| Equation::new(b.substitute(&bindings), c.substitute(&bindings)))
                .collect(),
        ))
    }

    /// `∧ (B_j = C_j) ⟹ (target = π)`
    pub fn backward_query(&self) -> Result<QuasiQuery, ExprError> {
        self.validate()?;
        Ok(QuasiQuery::new(
            self.pairs
                .iter()
                .map(|(b, c)| Equation::new(b.clone(), c.clone()))
                .collect(),
            vec![self.defining_equation()],
        ))
    }

    fn defining_equation(&self) -> Equation {
        Equation::new(self.target.clone(), Formula::var(&self.output))
    }
}

/// Decides both implications; the witness is accepted iff both are valid.
pub fn check_parametric_witness(w: &ParametricWitness) -> Result<(Verdict, Verdict), ExprError> {
    Ok((decide(&w.forward_query()?), decide(&w.backward_query()?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decide::replay;

    fn f(s: &str) -> Formula {
        s.parse().unwrap()
    }

    #[test]
    fn freshness_is_enforced() {
        let w = ParametricWitness {
            target: f("!p"),
            output: "p".into(),
            aux: vec![],
            pairs: vec![],
            substitutions: vec![],
        };
        assert_eq!(check_parametric_witness(&w), Err(ExprError::NotFresh("p".into())));
        let w = ParametricWitness {
            output: "q".into(),
            aux: vec!["r".into()],
            ..w
        };
        assert!(matches!(
            check_parametric_witness(&w),
            Err(ExprError::AuxMismatch { vars: 1, terms: 0 })
        ));
    }

    #[test]
    fn aux_parameters_are_substituted_forward_only() {
        // Δp = q defined through an auxiliary r: q = Δp ∧ r = r, with r := p
        let w = ParametricWitness {
            target: f("Dp"),
            output: "q".into(),
            aux: vec!["r".into()],
            pairs: vec![(f("q"), f("Dp")), (f("r | p"), f("p | r"))],
            substitutions: vec![f("p")],
        };
        let fwd = w.forward_query().unwrap();
        assert_eq!(fwd.conclusions[1], Equation::new(f("p | p"), f("p | p")));
        let (a, b) = check_parametric_witness(&w).unwrap();
        assert!(a.is_valid() && b.is_valid());
    }

    #[test]
    fn an_incomplete_definition_is_refuted() {
        // ∇q = 1 does not pin down q = ¬p
        let w = ParametricWitness {
            target: f("!p"),
            output: "q".into(),
            aux: vec![],
            pairs: vec![(f("@(!p <-> q)"), f("1"))],
            substitutions: vec![],
        };
        let (fwd, back) = check_parametric_witness(&w).unwrap();
        assert!(fwd.is_valid());
        let lasso = back.lasso().expect("backward direction fails");
        assert!(replay(lasso, &w.backward_query().unwrap()).unwrap());
    }
}
