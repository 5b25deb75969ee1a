//! The circuit vocabulary: predicates, node classes, component and function
//! classes, and their Wikidata links.
//!
//! The vocabulary is total and closed — unknown class names are errors, not
//! silently minted IRIs. Component classes can be extended through
//! configuration (symbol maps) and function classes through annotation rule
//! files; both go through [`Vocabulary::register_component_class`] /
//! [`Vocabulary::register_function_class`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::triple::{Atom, Term, Triple};

/// Predicate and class IRIs (qualified names) used by the circuit model.
pub mod iri {
    pub const RDF_TYPE: &str = "rdf:type";

    pub const CONNECTS: &str = "w:connects";
    pub const HAS_PART: &str = "w:has_part";
    pub const NAME: &str = "w:name";
    pub const HAS_FUNCTION: &str = "w:has_function";
    pub const WIKIDATA_LINK: &str = "w:wikidata_link";
    pub const POS_X: &str = "w:pos_x";
    pub const POS_Y: &str = "w:pos_y";
    pub const ON_SUPPLY: &str = "w:on_supply";
    pub const ROLE: &str = "w:role";

    pub const PORT: &str = "w:PORT";
    pub const JUNCTION: &str = "w:JUNCTION";
    pub const CROSSOVER: &str = "w:CROSSOVER";

    pub const VCC_RAIL: &str = "w:VCC_RAIL";
    pub const GND_RAIL: &str = "w:GND_RAIL";

    pub const ROLE_TAP_CAPABLE: &str = "w:tap_capable";
    pub const ROLE_TRANSISTOR: &str = "w:transistor";

    // Scaffolding classes derived during annotation; never serialized.
    pub const DIVIDER_MIDPOINT: &str = "w:DIVIDER_MIDPOINT";
    pub const SIGNAL_NODE: &str = "w:SIGNAL_NODE";
    pub const SWITCH_LOAD: &str = "w:SWITCH_LOAD";
    pub const DRIVEN_INPUT: &str = "w:DRIVEN_INPUT";
}

/// Qualified names of triples the reasoner derives as working scaffolding;
/// they never appear in serialized circuit output.
pub const SCAFFOLD_PREDICATES: &[&str] = &[iri::ON_SUPPLY, iri::ROLE];

const SCAFFOLD_CLASSES: &[&str] = &[
    iri::DIVIDER_MIDPOINT,
    iri::SIGNAL_NODE,
    iri::SWITCH_LOAD,
    iri::DRIVEN_INPUT,
];

pub fn is_scaffold_class(class_iri: &str) -> bool {
    SCAFFOLD_CLASSES.contains(&class_iri)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VocabError {
    #[error("unknown component class '{0}'")]
    UnknownComponentClass(String),
    #[error("unknown function class '{0}'")]
    UnknownFunctionClass(String),
    #[error("invalid class name '{0}': must be an uppercase identifier")]
    InvalidClassName(String),
    #[error("invalid Wikidata id '{id}' for {class_iri}: expected Q followed by digits")]
    InvalidWikidataId { class_iri: String, id: String },
}

macro_rules! class_enum {
    ($(#[$meta:meta])* $name:ident, $prefix:literal, { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum $name {
            $($variant,)+
            /// A class registered through configuration or rule files.
            Custom(Atom),
        }

        impl $name {
            pub const BUILTIN: &'static [$name] = &[$($name::$variant),+];

            /// The class name, e.g. `RESISTOR`.
            pub fn name(&self) -> &str {
                match self {
                    $($name::$variant => $text,)+
                    $name::Custom(name) => name,
                }
            }

            /// The class IRI as a qualified name.
            pub fn iri(&self) -> Term {
                Term::iri(format!(concat!($prefix, ":{}"), self.name()))
            }

            /// Resolves a built-in class by name.
            pub fn builtin_from_name(name: &str) -> Option<$name> {
                match name {
                    $($text => Some($name::$variant),)+
                    _ => None,
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }
    };
}

class_enum!(
    /// The kind of a schematic component.
    ComponentClass,
    "w",
    {
        Resistor => "RESISTOR",
        Capacitor => "CAPACITOR",
        Inductor => "INDUCTOR",
        Diode => "DIODE",
        Led => "LED",
        TransistorNpn => "TRANSISTOR_NPN",
        TransistorPnp => "TRANSISTOR_PNP",
        Crystal => "CRYSTAL",
        Switch => "SWITCH",
        Relay => "RELAY",
        Ic => "IC",
        VoltageSource => "VOLTAGE_SOURCE",
        VccSymbol => "VCC_SYMBOL",
        GndSymbol => "GND_SYMBOL",
        NetLabel => "NET_LABEL",
    }
);

impl ComponentClass {
    /// Supply-side classes: power symbols and sources.
    pub fn is_supply(&self) -> bool {
        matches!(
            self,
            ComponentClass::VccSymbol | ComponentClass::GndSymbol | ComponentClass::VoltageSource
        )
    }

    pub fn is_transistor(&self) -> bool {
        matches!(
            self,
            ComponentClass::TransistorNpn | ComponentClass::TransistorPnp
        )
    }

    /// Whether a component of this class counts as a tap on a net: anything
    /// that is neither a resistor nor supply-side.
    pub fn is_tap_capable(&self) -> bool {
        !matches!(self, ComponentClass::Resistor) && !self.is_supply()
    }
}

class_enum!(
    /// A derived functional role of a component.
    FunctionClass,
    "fn",
    {
        EmitterCommonAmplifier => "EMITTER_COMMON_AMPLIFIER",
        CouplingCapacitor => "COUPLING_CAPACITOR",
        ElectronicSwitch => "ELECTRONIC_SWITCH",
        FlybackDiode => "FLYBACK_DIODE",
        OscillatorCrystal => "OSCILLATOR_CRYSTAL",
        PullupResistor => "PULLUP_RESISTOR",
        VoltageDivider => "VOLTAGE_DIVIDER",
    }
);

/// The closed vocabulary map plus registered extensions and Wikidata links.
#[derive(Debug, Clone, Default)]
pub struct Vocabulary {
    custom_components: BTreeSet<Atom>,
    custom_functions: BTreeSet<Atom>,
    /// class IRI (qualified name) → Wikidata entity id.
    links: BTreeMap<String, String>,
}

impl Vocabulary {
    pub fn new() -> Vocabulary {
        Vocabulary::default()
    }

    fn check_class_name(name: &str) -> Result<(), VocabError> {
        let ok = !name.is_empty()
            && name
                .chars()
                .all(|c| c.is_ascii_uppercase() || c.is_ascii_digit() || c == '_')
            && name.chars().next().is_some_and(|c| c.is_ascii_uppercase());
        if ok {
            Ok(())
        } else {
            Err(VocabError::InvalidClassName(name.to_string()))
        }
    }

    /// Registers an additional component class, returning its handle.
    /// Registering a built-in name is a no-op.
    pub fn register_component_class(&mut self, name: &str) -> Result<ComponentClass, VocabError> {
        if let Some(builtin) = ComponentClass::builtin_from_name(name) {
            return Ok(builtin);
        }
        Self::check_class_name(name)?;
        let atom = Atom::from(name);
        self.custom_components.insert(atom.clone());
        Ok(ComponentClass::Custom(atom))
    }

    pub fn register_function_class(&mut self, name: &str) -> Result<FunctionClass, VocabError> {
        if let Some(builtin) = FunctionClass::builtin_from_name(name) {
            return Ok(builtin);
        }
        Self::check_class_name(name)?;
        let atom = Atom::from(name);
        self.custom_functions.insert(atom.clone());
        Ok(FunctionClass::Custom(atom))
    }

    /// Resolves a component class by name; unknown names are errors.
    pub fn component_class(&self, name: &str) -> Result<ComponentClass, VocabError> {
        if let Some(builtin) = ComponentClass::builtin_from_name(name) {
            return Ok(builtin);
        }
        self.custom_components
            .get(name)
            .map(|a| ComponentClass::Custom(a.clone()))
            .ok_or_else(|| VocabError::UnknownComponentClass(name.to_string()))
    }

    pub fn function_class(&self, name: &str) -> Result<FunctionClass, VocabError> {
        if let Some(builtin) = FunctionClass::builtin_from_name(name) {
            return Ok(builtin);
        }
        self.custom_functions
            .get(name)
            .map(|a| FunctionClass::Custom(a.clone()))
            .ok_or_else(|| VocabError::UnknownFunctionClass(name.to_string()))
    }

    /// Resolves an `rdf:type` object in the `w:` namespace to a component
    /// class.
    pub fn component_class_from_iri(&self, term: &Term) -> Result<ComponentClass, VocabError> {
        match (term.prefix(), term.local()) {
            (Some("w"), Some(local)) => self.component_class(local),
            _ => Err(VocabError::UnknownComponentClass(term.text().to_string())),
        }
    }

    pub fn function_class_from_iri(&self, term: &Term) -> Result<FunctionClass, VocabError> {
        match (term.prefix(), term.local()) {
            (Some("fn"), Some(local)) => self.function_class(local),
            _ => Err(VocabError::UnknownFunctionClass(term.text().to_string())),
        }
    }

    /// Associates a class IRI with a Wikidata entity id (`Q` + digits).
    pub fn set_link(&mut self, class_iri: &str, qid: &str) -> Result<(), VocabError> {
        let valid = qid.len() > 1
            && qid.starts_with('Q')
            && qid[1..].chars().all(|c| c.is_ascii_digit());
        if !valid {
            return Err(VocabError::InvalidWikidataId {
                class_iri: class_iri.to_string(),
                id: qid.to_string(),
            });
        }
        self.links.insert(class_iri.to_string(), qid.to_string());
        Ok(())
    }

    pub fn link_for(&self, class_iri: &str) -> Option<&str> {
        self.links.get(class_iri).map(|s| s.as_str())
    }

    pub fn links(&self) -> impl Iterator<Item = (&str, &str)> {
        self.links.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    fn component_classes(&self) -> Vec<ComponentClass> {
        let mut all: Vec<ComponentClass> = ComponentClass::BUILTIN.to_vec();
        all.extend(
            self.custom_components
                .iter()
                .map(|a| ComponentClass::Custom(a.clone())),
        );
        all
    }

    /// Class-role facts consumed by the annotation rules, e.g. which classes
    /// can act as a tap on a divider midpoint and which are transistors.
    /// These are working-store scaffolding, never serialized output.
    pub fn axiom_triples(&self) -> Vec<Triple> {
        let mut out = Vec::new();
        for class in self.component_classes() {
            if class.is_tap_capable() {
                out.push(Triple::new(
                    class.iri(),
                    Term::iri(iri::ROLE),
                    Term::iri(iri::ROLE_TAP_CAPABLE),
                ));
            }
            if class.is_transistor() {
                out.push(Triple::new(
                    class.iri(),
                    Term::iri(iri::ROLE),
                    Term::iri(iri::ROLE_TRANSISTOR),
                ));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_classes_resolve_by_name_and_iri() {
        let vocab = Vocabulary::new();
        assert_eq!(
            vocab.component_class("RESISTOR"),
            Ok(ComponentClass::Resistor)
        );
        assert_eq!(ComponentClass::Resistor.iri(), Term::iri("w:RESISTOR"));
        assert_eq!(
            vocab.component_class_from_iri(&Term::iri("w:DIODE")),
            Ok(ComponentClass::Diode)
        );
        assert_eq!(
            vocab.function_class_from_iri(&Term::iri("fn:FLYBACK_DIODE")),
            Ok(FunctionClass::FlybackDiode)
        );
    }

    #[test]
    fn unknown_names_are_errors_not_minted() {
        let vocab = Vocabulary::new();
        assert_eq!(
            vocab.component_class("WIDGET"),
            Err(VocabError::UnknownComponentClass("WIDGET".into()))
        );
        assert_eq!(
            vocab.function_class_from_iri(&Term::iri("fn:MYSTERY")),
            Err(VocabError::UnknownFunctionClass("MYSTERY".into()))
        );
    }

    #[test]
    fn registered_classes_resolve() {
        let mut vocab = Vocabulary::new();
        let c = vocab.register_component_class("THERMISTOR").unwrap();
        assert_eq!(c.name(), "THERMISTOR");
        assert_eq!(vocab.component_class("THERMISTOR"), Ok(c));
        assert!(vocab.register_component_class("lowercase").is_err());
    }

    #[test]
    fn wikidata_ids_must_match_pattern() {
        let mut vocab = Vocabulary::new();
        vocab.set_link("w:RESISTOR", "Q5321").unwrap();
        assert_eq!(vocab.link_for("w:RESISTOR"), Some("Q5321"));
        assert!(vocab.set_link("w:DIODE", "5321").is_err());
        assert!(vocab.set_link("w:DIODE", "Q").is_err());
        assert!(vocab.set_link("w:DIODE", "Q12x").is_err());
    }

    #[test]
    fn role_axioms_cover_taps_and_transistors() {
        let vocab = Vocabulary::new();
        let axioms = vocab.axiom_triples();
        let has = |s: &str, o: &str| {
            axioms.contains(&Triple::new(
                Term::iri(s),
                Term::iri(iri::ROLE),
                Term::iri(o),
            ))
        };
        assert!(has("w:CAPACITOR", iri::ROLE_TAP_CAPABLE));
        assert!(has("w:NET_LABEL", iri::ROLE_TAP_CAPABLE));
        assert!(has("w:TRANSISTOR_NPN", iri::ROLE_TRANSISTOR));
        assert!(has("w:TRANSISTOR_PNP", iri::ROLE_TRANSISTOR));
        assert!(!has("w:RESISTOR", iri::ROLE_TAP_CAPABLE));
        assert!(!has("w:VCC_SYMBOL", iri::ROLE_TAP_CAPABLE));
        assert!(!has("w:GND_SYMBOL", iri::ROLE_TAP_CAPABLE));
        assert!(!has("w:VOLTAGE_SOURCE", iri::ROLE_TAP_CAPABLE));
    }
}
