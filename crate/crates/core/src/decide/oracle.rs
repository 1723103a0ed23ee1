use crate::element::Element;
use crate::eval::{holds_equation, Assignment};

use super::QuasiQuery;

/// Exhaustively searches assignments of canonical elements with prefix length
/// at most `bound` for a violation of `q`.
///
/// Refutation-sound but not validity-complete: `None` only means no
/// counterexample lives in the box. Evaluation is exact and does not share
/// any code with the transducer.
pub fn brute_force(q: &QuasiQuery, bound: usize) -> Option<Assignment> {
    let vars: Vec<String> = q.free_vars().into_iter().collect();
    let universe: Vec<Element> = Element::enumerate(bound).collect();
    let mut digits = vec![0usize; vars.len()];
    let mut assignment: Assignment = vars
        .iter()
        .map(|v| (v.clone(), universe[0].clone()))
        .collect();
    let holds = |a: &Assignment, eq: &super::Equation| {
        holds_equation(&eq.lhs, &eq.rhs, a).expect("all query variables are bound")
    };
    loop {
        if q.hypotheses.iter().all(|h| holds(&assignment, h))
            && !q.conclusions.iter().all(|c| holds(&assignment, c))
        {
            return Some(assignment);
        }
        // odometer, last variable fastest
        let mut i = vars.len();
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < universe.len() {
                assignment.insert(vars[i].clone(), universe[digits[i]].clone());
                break;
            }
            digits[i] = 0;
            assignment.insert(vars[i].clone(), universe[0].clone());
        }
    }
}
