use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Source language of a file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Language {
    Java,
    Python,
}

impl Language {
    pub fn from_extension(ext: &str) -> Option<Language> {
        match ext {
            "java" => Some(Language::Java),
            "py" => Some(Language::Python),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Language::Java => "java",
            Language::Python => "python",
        }
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Language {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "java" => Ok(Language::Java),
            "python" | "py" => Ok(Language::Python),
            other => Err(format!("unknown language `{other}`")),
        }
    }
}

/// The closed vocabulary of syntax element kinds exposed to classifiers.
///
/// Java and Python each have their own names for the nine element types
/// that carry across languages; the remaining kinds are shared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NodeKind {
    // java
    SimpleName,
    MethodDeclaration,
    ExpressionStatement,
    IfStatement,
    MethodInvocation,
    ForStatement,
    StringLiteral,
    NumberLiteral,
    ArrayInitializer,
    // python
    Name,
    FunctionDef,
    Expr,
    If,
    Call,
    For,
    Str,
    Num,
    Tuple,
    // shared
    Block,
    ReturnStatement,
    VariableDeclaration,
    CatchClause,
    Root,
    Other,
}

impl NodeKind {
    pub const ALL: [NodeKind; 24] = [
        NodeKind::SimpleName,
        NodeKind::MethodDeclaration,
        NodeKind::ExpressionStatement,
        NodeKind::IfStatement,
        NodeKind::MethodInvocation,
        NodeKind::ForStatement,
        NodeKind::StringLiteral,
        NodeKind::NumberLiteral,
        NodeKind::ArrayInitializer,
        NodeKind::Name,
        NodeKind::FunctionDef,
        NodeKind::Expr,
        NodeKind::If,
        NodeKind::Call,
        NodeKind::For,
        NodeKind::Str,
        NodeKind::Num,
        NodeKind::Tuple,
        NodeKind::Block,
        NodeKind::ReturnStatement,
        NodeKind::VariableDeclaration,
        NodeKind::CatchClause,
        NodeKind::Root,
        NodeKind::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            NodeKind::SimpleName => "SimpleName",
            NodeKind::MethodDeclaration => "MethodDeclaration",
            NodeKind::ExpressionStatement => "ExpressionStatement",
            NodeKind::IfStatement => "IfStatement",
            NodeKind::MethodInvocation => "MethodInvocation",
            NodeKind::ForStatement => "ForStatement",
            NodeKind::StringLiteral => "StringLiteral",
            NodeKind::NumberLiteral => "NumberLiteral",
            NodeKind::ArrayInitializer => "ArrayInitializer",
            NodeKind::Name => "Name",
            NodeKind::FunctionDef => "FunctionDef",
            NodeKind::Expr => "Expr",
            NodeKind::If => "If",
            NodeKind::Call => "Call",
            NodeKind::For => "For",
            NodeKind::Str => "Str",
            NodeKind::Num => "Num",
            NodeKind::Tuple => "Tuple",
            NodeKind::Block => "Block",
            NodeKind::ReturnStatement => "ReturnStatement",
            NodeKind::VariableDeclaration => "VariableDeclaration",
            NodeKind::CatchClause => "CatchClause",
            NodeKind::Root => "Root",
            NodeKind::Other => "Other",
        }
    }

    /// The language whose grammar produces this kind, or `None` for kinds
    /// shared by both languages.
    pub fn language(self) -> Option<Language> {
        use NodeKind::*;
        match self {
            SimpleName | MethodDeclaration | ExpressionStatement | IfStatement | MethodInvocation | ForStatement
            | StringLiteral | NumberLiteral | ArrayInitializer => Some(Language::Java),
            Name | FunctionDef | Expr | If | Call | For | Str | Num | Tuple => Some(Language::Python),
            Block | ReturnStatement | VariableDeclaration | CatchClause | Root | Other => None,
        }
    }

    /// Maps a grammar node type name onto the closed vocabulary.
    pub fn from_grammar(language: Language, grammar_kind: &str) -> NodeKind {
        let table = match language {
            Language::Java => JAVA_KINDS,
            Language::Python => PYTHON_KINDS,
        };
        table
            .iter()
            .find(|(name, _)| *name == grammar_kind)
            .map_or(NodeKind::Other, |(_, kind)| *kind)
    }
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NodeKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        NodeKind::ALL
            .iter()
            .copied()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown syntax kind `{s}`"))
    }
}

const JAVA_KINDS: &[(&str, NodeKind)] = &[
    ("program", NodeKind::Root),
    ("identifier", NodeKind::SimpleName),
    ("type_identifier", NodeKind::SimpleName),
    ("method_declaration", NodeKind::MethodDeclaration),
    ("constructor_declaration", NodeKind::MethodDeclaration),
    ("expression_statement", NodeKind::ExpressionStatement),
    ("if_statement", NodeKind::IfStatement),
    ("method_invocation", NodeKind::MethodInvocation),
    ("for_statement", NodeKind::ForStatement),
    ("enhanced_for_statement", NodeKind::ForStatement),
    ("string_literal", NodeKind::StringLiteral),
    ("decimal_integer_literal", NodeKind::NumberLiteral),
    ("hex_integer_literal", NodeKind::NumberLiteral),
    ("octal_integer_literal", NodeKind::NumberLiteral),
    ("binary_integer_literal", NodeKind::NumberLiteral),
    ("decimal_floating_point_literal", NodeKind::NumberLiteral),
    ("hex_floating_point_literal", NodeKind::NumberLiteral),
    ("array_initializer", NodeKind::ArrayInitializer),
    ("block", NodeKind::Block),
    ("constructor_body", NodeKind::Block),
    ("return_statement", NodeKind::ReturnStatement),
    ("local_variable_declaration", NodeKind::VariableDeclaration),
    ("field_declaration", NodeKind::VariableDeclaration),
    ("catch_clause", NodeKind::CatchClause),
];

const PYTHON_KINDS: &[(&str, NodeKind)] = &[
    ("module", NodeKind::Root),
    ("identifier", NodeKind::Name),
    ("function_definition", NodeKind::FunctionDef),
    ("expression_statement", NodeKind::Expr),
    ("if_statement", NodeKind::If),
    ("call", NodeKind::Call),
    ("for_statement", NodeKind::For),
    ("string", NodeKind::Str),
    ("concatenated_string", NodeKind::Str),
    ("integer", NodeKind::Num),
    ("float", NodeKind::Num),
    ("tuple", NodeKind::Tuple),
    ("block", NodeKind::Block),
    ("return_statement", NodeKind::ReturnStatement),
    ("except_clause", NodeKind::CatchClause),
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for kind in NodeKind::ALL {
            assert_eq!(kind.as_str().parse::<NodeKind>().unwrap(), kind);
        }
        assert!("Foo".parse::<NodeKind>().is_err());
    }

    #[test]
    fn unknown_grammar_kinds_collapse_to_other() {
        assert_eq!(
            NodeKind::from_grammar(Language::Java, "while_statement"),
            NodeKind::Other
        );
        assert_eq!(
            NodeKind::from_grammar(Language::Python, "function_definition"),
            NodeKind::FunctionDef
        );
        assert_eq!(
            NodeKind::from_grammar(Language::Java, "method_declaration"),
            NodeKind::MethodDeclaration
        );
    }
}
