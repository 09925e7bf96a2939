use std::fmt;

use super::{build_dependency_graph, desugar_concat, ExtensionKind, Formula, Pattern, PatternShape, Rhs};

pub const REASON_VAR_PATTERN: &str =
    "undecidable: replaceall with a variable pattern parameter (reduction from Post's correspondence problem)";
pub const REASON_LENGTH: &str =
    "undecidable: length constraints, even a single integer constraint |x| = |y| (reduction from Hilbert's tenth problem)";
pub const REASON_CHARACTER: &str =
    "undecidable: character constraints x[i] = y[j], which encode |x| = |y| (reduction from Hilbert's tenth problem)";
pub const REASON_INDEXOF: &str =
    "undecidable: indexof constraints under first-occurrence semantics, which encode |x| = |y| (reduction from Hilbert's tenth problem)";

/// Most specific fragment; variants are ordered from most to least specific.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FragmentClass {
    SingleLetter,
    ConstantString,
    RegexPattern,
    VarPattern,
    ExtendedUndecidable,
}

impl FragmentClass {
    pub fn name(self) -> &'static str {
        match self {
            FragmentClass::SingleLetter => "single-letter",
            FragmentClass::ConstantString => "constant-string",
            FragmentClass::RegexPattern => "regex",
            FragmentClass::VarPattern => "variable-pattern",
            FragmentClass::ExtendedUndecidable => "undecidable-extension",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        [
            FragmentClass::SingleLetter,
            FragmentClass::ConstantString,
            FragmentClass::RegexPattern,
            FragmentClass::VarPattern,
            FragmentClass::ExtendedUndecidable,
        ]
        .into_iter()
        .find(|c| c.name() == s)
    }
}

impl fmt::Display for FragmentClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub class: FragmentClass,
    pub diamond_index: usize,
    pub l_length: usize,
    pub depth: usize,
    pub advisory: String,
    /// Set exactly for the undecidable classes.
    pub reason: Option<String>,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}; diamond-index {}; l-length {}; depth {}; advisory: {}",
            self.class, self.diamond_index, self.l_length, self.depth, self.advisory
        )
    }
}

/// The citation for the first undecidable feature, if any.
/// Variable patterns take precedence over extension atoms.
pub fn unsupported_reason(f: &Formula) -> Option<&'static str> {
    let var_pattern = f.definitions.iter().any(|d| {
        matches!(
            d.rhs,
            Rhs::ReplaceAll {
                pattern: Pattern::Var(_),
                ..
            }
        )
    });
    if var_pattern {
        return Some(REASON_VAR_PATTERN);
    }
    f.extensions.first().map(|e| match e.kind {
        ExtensionKind::Length => REASON_LENGTH,
        ExtensionKind::Character => REASON_CHARACTER,
        ExtensionKind::IndexOf => REASON_INDEXOF,
    })
}

/// Classifies the concatenation-free form of `f`; statistics refer to it.
///
/// # Panics
/// If the definitions are cyclic; see [`super::check_straight_line`].
pub fn classify(f: &Formula) -> Classification {
    let d = desugar_concat(f).formula;
    let g = build_dependency_graph(&d);
    let (diamond_index, l_length, depth) = (g.diamond_index(), g.l_length(), g.depth());
    let reason = unsupported_reason(f);
    let class = if reason == Some(REASON_VAR_PATTERN) {
        FragmentClass::VarPattern
    } else if reason.is_some() {
        FragmentClass::ExtendedUndecidable
    } else {
        d.definitions
            .iter()
            .filter_map(|def| match &def.rhs {
                Rhs::ReplaceAll { pattern, .. } => pattern.shape(),
                Rhs::Concat(..) => None,
            })
            .map(|s| match s {
                PatternShape::Letter(_) => FragmentClass::SingleLetter,
                PatternShape::Word(_) => FragmentClass::ConstantString,
                PatternShape::Epsilon | PatternShape::Regex(_) => FragmentClass::RegexPattern,
            })
            .max()
            .unwrap_or(FragmentClass::SingleLetter)
    };
    let advisory = match class {
        FragmentClass::SingleLetter => format!(
            "PSPACE fragment (single-letter patterns, diamond index at most {diamond_index})"
        ),
        FragmentClass::ConstantString => {
            format!("PSPACE fragment (constant patterns, l-length at most {l_length})")
        }
        FragmentClass::RegexPattern if l_length <= 1 => {
            "PSPACE fragment (regex patterns, l-length at most 1)".to_string()
        }
        FragmentClass::RegexPattern => {
            format!("EXPSPACE upper bound (regex patterns, l-length {l_length})")
        }
        FragmentClass::VarPattern | FragmentClass::ExtendedUndecidable => "undecidable".to_string(),
    };
    Classification {
        class,
        diamond_index,
        l_length,
        depth,
        advisory,
        reason: reason.map(str::to_string),
    }
}
