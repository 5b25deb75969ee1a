//! JSON annotation report with stable key ordering, so CI can diff it.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::library::PipelineOutput;

#[derive(Debug, Serialize)]
pub struct Report {
    pub components: Vec<ComponentReport>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct ComponentReport {
    pub id: String,
    pub class: String,
    pub name: String,
    pub functions: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub explanations: Vec<Explanation>,
}

#[derive(Debug, Serialize)]
pub struct Explanation {
    pub function: String,
    pub rule: String,
    pub bindings: BTreeMap<String, String>,
}

/// Builds the per-component report from a pipeline run. Components are
/// listed in id order; `explain` adds the rule and bindings behind every
/// derived function.
pub fn build_report(out: &PipelineOutput, explain: bool, warnings: &[String]) -> Report {
    let mut components = Vec::new();
    for view in out.graph.components() {
        let mut functions: Vec<String> = out
            .graph
            .annotations()
            .iter()
            .filter(|a| &a.component == view.id)
            .map(|a| a.class.name().to_string())
            .collect();
        functions.sort();
        functions.dedup();
        let mut explanations = Vec::new();
        if explain {
            for annotation in out
                .graph
                .annotations()
                .iter()
                .filter(|a| &a.component == view.id)
            {
                for provenance in &annotation.provenance {
                    explanations.push(Explanation {
                        function: annotation.class.name().to_string(),
                        rule: provenance.rule.clone(),
                        bindings: provenance
                            .bindings
                            .iter()
                            .map(|(k, v)| (k.to_string(), v.to_string()))
                            .collect(),
                    });
                }
            }
            explanations.sort_by(|a, b| {
                (&a.function, &a.rule, format!("{:?}", a.bindings))
                    .cmp(&(&b.function, &b.rule, format!("{:?}", b.bindings)))
            });
        }
        components.push(ComponentReport {
            id: view.id.to_string(),
            class: view.class.name().to_string(),
            name: view.name.to_string(),
            functions,
            explanations,
        });
    }
    let mut all_warnings: Vec<String> = warnings.to_vec();
    all_warnings.extend(out.warnings.iter().cloned());
    Report {
        components,
        warnings: all_warnings,
    }
}

pub fn render_report(report: &Report) -> String {
    serde_json::to_string_pretty(report).expect("report serializes") + "\n"
}
