//! Limits on omission errors per sentence.
//!
//! Learners in the target population rarely leave out more than one
//! constituent per sentence, determiners excepted. Each edge carries
//! counts of the omission mal-rules used beneath it; [`MissingFilter`]
//! drops edges over the limit before they enter the chart.

use serde::{Deserialize, Serialize};

use crate::chart::{ConstituentFilter, Edge, FilterAction};
use crate::grammar::{OmissionKind, Rule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct OmissionPolicy {
    pub max_other_omissions: u32,
    /// Determiner omissions do not count toward the limit.
    pub determiners_exempt: bool,
}

impl Default for OmissionPolicy {
    fn default() -> Self {
        OmissionPolicy { max_other_omissions: 1, determiners_exempt: true }
    }
}

/// Counter deltas `(determiner, other)` for one application of `rule`.
pub fn omission_contribution(rule: &Rule) -> (u32, u32) {
    match rule.omission() {
        OmissionKind::None => (0, 0),
        OmissionKind::Determiner => (1, 0),
        OmissionKind::Other => (0, 1),
    }
}

pub fn missing_filter(candidate: &Edge, policy: &OmissionPolicy) -> FilterAction {
    let counted = if policy.determiners_exempt {
        candidate.other_omissions
    } else {
        candidate.other_omissions + candidate.det_omissions
    };
    if counted > policy.max_other_omissions {
        FilterAction::Discard
    } else {
        FilterAction::Keep
    }
}

/// Runs [`missing_filter`] on every edge built with an omission rule.
#[derive(Debug, Clone, Copy, Default)]
pub struct MissingFilter {
    pub policy: OmissionPolicy,
}

impl MissingFilter {
    pub fn new(policy: OmissionPolicy) -> Self {
        MissingFilter { policy }
    }
}

impl ConstituentFilter for MissingFilter {
    fn matches(&self, edge: &Edge) -> bool {
        edge.det_omissions > 0 || edge.other_omissions > 0
    }

    fn apply(&self, edge: &Edge) -> FilterAction {
        missing_filter(edge, &self.policy)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::Grammar;

    fn edge(det: u32, other: u32) -> Edge {
        let g = Grammar::demo();
        Edge {
            category: g.unknown_category().unwrap().clone(),
            start: 0,
            end: 1,
            children: Vec::new(),
            rule: None,
            score: 1.0,
            det_omissions: det,
            other_omissions: other,
            errors: Vec::new(),
        }
    }

    #[test]
    fn determiner_omissions_are_exempt() {
        let p = OmissionPolicy::default();
        // "Student always bothering me": one missing determiner, one missing verb
        assert_eq!(missing_filter(&edge(1, 1), &p), FilterAction::Keep);
        assert_eq!(missing_filter(&edge(3, 1), &p), FilterAction::Keep);
        assert_eq!(missing_filter(&edge(0, 2), &p), FilterAction::Discard);
        assert_eq!(missing_filter(&edge(0, 0), &p), FilterAction::Keep);
    }

    #[test]
    fn policy_can_count_determiners() {
        let p = OmissionPolicy { max_other_omissions: 1, determiners_exempt: false };
        assert_eq!(missing_filter(&edge(1, 1), &p), FilterAction::Discard);
        let p = OmissionPolicy { max_other_omissions: 0, determiners_exempt: true };
        assert_eq!(missing_filter(&edge(0, 1), &p), FilterAction::Discard);
    }

    #[test]
    fn contributions_by_rule_kind() {
        let g = Grammar::demo();
        let of = |id| omission_contribution(g.rule(g.rule_index(id).unwrap()));
        assert_eq!(of("dp-no-det"), (1, 0));
        assert_eq!(of("vp-nocop-adj"), (0, 1));
        assert_eq!(of("dp-det"), (0, 0));
        assert_eq!(of("dp-det-sg"), (0, 0));
    }
}
