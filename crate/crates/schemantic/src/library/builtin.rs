//! The shipped rule library: staged preprocessing rules and the annotation
//! rule files, one file per function family.

use thiserror::Error;

use crate::model::{FunctionClass, VocabError, Vocabulary};
use crate::rules::{
    apply_to_fixpoint, parse_rules_named, Derivation, Rule, RuleError, RuleSet, TriplePattern,
};
use crate::triple::{Term, TripleStore};

#[derive(Debug, Error)]
pub enum LibraryError {
    #[error("rule file {file}: {source}")]
    Rules {
        file: String,
        #[source]
        source: RuleError,
    },
    #[error("rule file {file}: head pattern {pattern} of rule '{rule}' must assign a function or type a resource")]
    BadHead {
        file: String,
        rule: String,
        pattern: usize,
    },
    #[error("rule file {file}: {source}")]
    Vocab {
        file: String,
        #[source]
        source: VocabError,
    },
}

/// Preprocessing rules grouped in stages. Stages are a scheduling hint:
/// the whole sequence is swept to a global fixpoint, so the final store is
/// exactly the least fixpoint of all stages combined (resolution-stage
/// results can re-enable supply normalization, for example).
#[derive(Debug, Clone)]
pub struct BuiltinRuleSet {
    stages: Vec<(String, RuleSet)>,
}

impl BuiltinRuleSet {
    pub fn stages(&self) -> impl Iterator<Item = (&str, &RuleSet)> {
        self.stages.iter().map(|(n, r)| (n.as_str(), r))
    }

    /// All rules of all stages as one flat set.
    pub fn combined(&self) -> RuleSet {
        let mut all = RuleSet::empty();
        for (_, stage) in &self.stages {
            all.merge(stage.clone()).expect("stage rule names are distinct");
        }
        all
    }

    /// Runs the staged sequence to a global fixpoint, returning the number
    /// of added triples and the recorded derivations.
    pub fn apply(&self, store: &mut TripleStore) -> (usize, Vec<Derivation>) {
        let mut added = 0;
        let mut derivations = Vec::new();
        loop {
            let mut sweep_added = 0;
            for (_, stage) in &self.stages {
                let run = apply_to_fixpoint(store, stage);
                sweep_added += run.added;
                derivations.extend(run.derivations);
            }
            added += sweep_added;
            if sweep_added == 0 {
                return (added, derivations);
            }
        }
    }
}

/// The built-in preprocessing stages: electrical symmetry, supply
/// normalization, then port/junction/crossover resolution.
pub fn builtin_preprocessing() -> BuiltinRuleSet {
    let load = |name: &str, text: &str| -> (String, RuleSet) {
        (
            name.to_string(),
            parse_rules_named(text, Some(name)).expect("bundled preprocessing rules parse"),
        )
    };
    BuiltinRuleSet {
        stages: vec![
            load(
                "preprocessing/01_symmetry.rules",
                include_str!("../../rules/preprocessing/01_symmetry.rules"),
            ),
            load(
                "preprocessing/02_supply.rules",
                include_str!("../../rules/preprocessing/02_supply.rules"),
            ),
            load(
                "preprocessing/03_resolution.rules",
                include_str!("../../rules/preprocessing/03_resolution.rules"),
            ),
        ],
    }
}

/// A rule evaluated in the final pipeline stage under absence guards:
/// a binding fires only if none of the `absent` pattern groups can be
/// satisfied as an extension of it. This is negation-as-absence at pipeline
/// level; the rule engine itself stays monotone.
#[derive(Debug, Clone)]
pub struct GuardedRule {
    pub rule: Rule,
    pub absent: Vec<Vec<TriplePattern>>,
}

/// One annotation rule file: its main-stage rules, any guarded final-stage
/// rules, and the function classes its heads declare.
#[derive(Debug, Clone)]
pub struct AnnotationRuleFile {
    pub file_name: String,
    pub rules: RuleSet,
    pub guarded: Vec<GuardedRule>,
    pub declared: Vec<FunctionClass>,
    /// Leading comment block of the file.
    pub doc: String,
}

impl AnnotationRuleFile {
    /// Parses an annotation rule file. Every head pattern must either
    /// assign a function (`w:has_function`) or type a resource (`rdf:type`);
    /// `fn:` classes appearing in heads are registered into the vocabulary.
    pub fn load(
        file_name: &str,
        text: &str,
        vocab: &mut Vocabulary,
    ) -> Result<AnnotationRuleFile, LibraryError> {
        let rules = parse_rules_named(text, Some(file_name)).map_err(|source| {
            LibraryError::Rules {
                file: file_name.to_string(),
                source,
            }
        })?;
        let mut declared = Vec::new();
        for rule in rules.rules() {
            for (i, head) in rule.head.iter().enumerate() {
                let predicate = head.predicate.text();
                if predicate != crate::model::vocab::iri::HAS_FUNCTION
                    && predicate != crate::model::vocab::iri::RDF_TYPE
                {
                    return Err(LibraryError::BadHead {
                        file: file_name.to_string(),
                        rule: rule.name.clone(),
                        pattern: i + 1,
                    });
                }
                if let Term::Iri(_) = &head.object {
                    if head.object.prefix() == Some("fn") {
                        let class = vocab
                            .register_function_class(head.object.local().unwrap_or(""))
                            .map_err(|source| LibraryError::Vocab {
                                file: file_name.to_string(),
                                source,
                            })?;
                        if !declared.contains(&class) {
                            declared.push(class);
                        }
                    }
                }
            }
        }
        let doc = text
            .lines()
            .take_while(|l| l.trim_start().starts_with('#'))
            .map(|l| l.trim_start().trim_start_matches('#').trim())
            .collect::<Vec<_>>()
            .join(" ");
        Ok(AnnotationRuleFile {
            file_name: file_name.to_string(),
            rules,
            guarded: Vec::new(),
            declared,
            doc,
        })
    }

    /// Moves a rule into the guarded final stage with the given absence
    /// groups.
    fn guard(&mut self, rule_name: &str, absent: Vec<Vec<TriplePattern>>) {
        if let Some(rule) = self.rules.take(rule_name) {
            self.guarded.push(GuardedRule { rule, absent });
        }
    }
}

fn pattern(s: Term, p: &str, o: Term) -> TriplePattern {
    TriplePattern::new(s, Term::iri(p), o)
}

/// The seven shipped annotation rule files, in application order.
///
/// Two built-in rules run in the guarded final stage:
/// `coupling` (neither capacitor port may be on a supply rail) and
/// `switchTransistor` (the base must not sit on a divider midpoint).
pub fn builtin_annotations(vocab: &mut Vocabulary) -> Vec<AnnotationRuleFile> {
    use crate::model::vocab::iri;

    let sources: [(&str, &str); 7] = [
        (
            "annotations/01_flyback_diode.rules",
            include_str!("../../rules/annotations/01_flyback_diode.rules"),
        ),
        (
            "annotations/02_voltage_divider.rules",
            include_str!("../../rules/annotations/02_voltage_divider.rules"),
        ),
        (
            "annotations/03_pullup_resistor.rules",
            include_str!("../../rules/annotations/03_pullup_resistor.rules"),
        ),
        (
            "annotations/04_coupling_capacitor.rules",
            include_str!("../../rules/annotations/04_coupling_capacitor.rules"),
        ),
        (
            "annotations/05_common_emitter.rules",
            include_str!("../../rules/annotations/05_common_emitter.rules"),
        ),
        (
            "annotations/06_electronic_switch.rules",
            include_str!("../../rules/annotations/06_electronic_switch.rules"),
        ),
        (
            "annotations/07_oscillator_crystal.rules",
            include_str!("../../rules/annotations/07_oscillator_crystal.rules"),
        ),
    ];
    let mut files: Vec<AnnotationRuleFile> = sources
        .iter()
        .map(|(name, text)| {
            AnnotationRuleFile::load(name, text, vocab).expect("bundled annotation rules parse")
        })
        .collect();

    let var = Term::variable;
    for file in &mut files {
        if file.file_name.ends_with("04_coupling_capacitor.rules") {
            file.guard(
                "coupling",
                vec![
                    vec![pattern(var("c1"), iri::ON_SUPPLY, var("rail1"))],
                    vec![pattern(var("c2"), iri::ON_SUPPLY, var("rail2"))],
                ],
            );
        }
        if file.file_name.ends_with("06_electronic_switch.rules") {
            file.guard(
                "switchTransistor",
                vec![vec![
                    pattern(var("b"), iri::CONNECTS, var("mid")),
                    pattern(var("mid"), iri::RDF_TYPE, Term::iri(iri::DIVIDER_MIDPOINT)),
                ]],
            );
        }
    }
    files
}

/// Loads every `*.rules` file of a directory as annotation rule files, in
/// lexical order.
pub fn load_rule_dir(
    dir: &std::path::Path,
    vocab: &mut Vocabulary,
) -> Result<Vec<AnnotationRuleFile>, LibraryError> {
    let mut paths: Vec<std::path::PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| LibraryError::Rules {
            file: dir.display().to_string(),
            source: RuleError::Syntax {
                line: 0,
                column: 0,
                message: e.to_string(),
            },
        })?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "rules"))
        .collect();
    paths.sort();
    let mut files = Vec::new();
    for path in paths {
        let text = std::fs::read_to_string(&path).map_err(|e| LibraryError::Rules {
            file: path.display().to_string(),
            source: RuleError::Syntax {
                line: 0,
                column: 0,
                message: e.to_string(),
            },
        })?;
        files.push(AnnotationRuleFile::load(
            &path.display().to_string(),
            &text,
            vocab,
        )?);
    }
    Ok(files)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::vocab::iri;
    use crate::triple::Triple;

    #[test]
    fn builtin_preprocessing_parses_with_expected_rules() {
        let pre = builtin_preprocessing();
        let names: Vec<&str> = pre
            .stages()
            .flat_map(|(_, set)| set.rules().iter().map(|r| r.name.as_str()))
            .collect();
        assert_eq!(
            names,
            vec![
                "electSymm",
                "supplyVcc",
                "supplyGnd",
                "supplyVsrcPos",
                "supplyVsrcNeg",
                "res",
                "byJ",
                "resCroA",
                "resCroB"
            ]
        );
    }

    #[test]
    fn builtin_annotations_cover_all_seven_function_classes() {
        let mut vocab = Vocabulary::new();
        let files = builtin_annotations(&mut vocab);
        assert_eq!(files.len(), 7);
        let declared: Vec<FunctionClass> =
            files.iter().flat_map(|f| f.declared.clone()).collect();
        for class in FunctionClass::BUILTIN {
            assert!(declared.contains(class), "missing {class}");
        }
    }

    #[test]
    fn guarded_rules_are_split_out() {
        let mut vocab = Vocabulary::new();
        let files = builtin_annotations(&mut vocab);
        let coupling_file = &files[3];
        assert_eq!(coupling_file.guarded.len(), 1);
        assert_eq!(coupling_file.guarded[0].rule.name, "coupling");
        assert!(coupling_file.rules.get("coupling").is_none());
        let switch_file = &files[5];
        assert_eq!(switch_file.guarded.len(), 1);
        assert_eq!(switch_file.guarded[0].rule.name, "switchTransistor");
        assert!(switch_file.rules.get("switchComponent").is_some());
    }

    #[test]
    fn annotation_heads_must_assign_or_type() {
        let mut vocab = Vocabulary::new();
        let err = AnnotationRuleFile::load(
            "bad.rules",
            "[x: (?a w:connects ?b) -> (?a w:connects ?b)]",
            &mut vocab,
        )
        .unwrap_err();
        assert!(matches!(err, LibraryError::BadHead { .. }));
    }

    #[test]
    fn rule_files_register_new_function_classes() {
        let mut vocab = Vocabulary::new();
        let file = AnnotationRuleFile::load(
            "extra.rules",
            "[snub: (?r rdf:type w:RESISTOR) -> (?r w:has_function fn:SNUBBER)]",
            &mut vocab,
        )
        .unwrap();
        assert_eq!(file.declared.len(), 1);
        assert_eq!(file.declared[0].name(), "SNUBBER");
        assert!(vocab.function_class("SNUBBER").is_ok());
    }

    /// No has_function triple is derivable from the preprocessing rules
    /// alone: their heads only produce connects and on_supply triples.
    #[test]
    fn preprocessing_never_annotates() {
        let pre = builtin_preprocessing();
        for (_, stage) in pre.stages.iter() {
            for rule in stage.rules() {
                for head in &rule.head {
                    assert_ne!(head.predicate.text(), iri::HAS_FUNCTION);
                }
            }
        }
        // And on a concrete store: symmetry plus resolution derive nothing
        // with the has_function predicate.
        let mut store = TripleStore::new();
        for (s, p, o) in [
            ("w:a", iri::CONNECTS, "w:j"),
            ("w:b", iri::CONNECTS, "w:j"),
            ("w:j", iri::RDF_TYPE, "w:JUNCTION"),
        ] {
            store
                .insert(Triple::new(Term::iri(s), Term::iri(p), Term::iri(o)))
                .unwrap();
        }
        pre.apply(&mut store);
        assert!(store
            .matching(None, Some(&Term::iri(iri::HAS_FUNCTION)), None)
            .is_empty());
    }

    #[test]
    fn staged_apply_equals_combined_fixpoint() {
        let pre = builtin_preprocessing();
        let mut base = TripleStore::new();
        for (s, p, o) in [
            ("w:R1", iri::RDF_TYPE, "w:RESISTOR"),
            ("w:R1", iri::HAS_PART, "w:R1_1"),
            ("w:R1_1", iri::RDF_TYPE, "w:PORT"),
            ("w:V1", iri::RDF_TYPE, "w:VCC_SYMBOL"),
            ("w:V1", iri::HAS_PART, "w:V1_1"),
            ("w:V1_1", iri::RDF_TYPE, "w:PORT"),
            ("w:R1_1", iri::CONNECTS, "w:j"),
            ("w:V1_1", iri::CONNECTS, "w:j"),
            ("w:j", iri::RDF_TYPE, "w:JUNCTION"),
        ] {
            base.insert(Triple::new(Term::iri(s), Term::iri(p), Term::iri(o)))
                .unwrap();
        }
        let mut staged = base.clone();
        pre.apply(&mut staged);
        let mut unstaged = base;
        apply_to_fixpoint(&mut unstaged, &pre.combined());
        assert_eq!(staged.triples(), unstaged.triples());
        // Supply normalization must have seen the resolved connections.
        assert!(staged.contains(&Triple::new(
            Term::iri("w:R1_1"),
            Term::iri(iri::ON_SUPPLY),
            Term::iri(iri::VCC_RAIL)
        )));
    }
}
