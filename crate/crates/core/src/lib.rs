pub mod category;
pub mod corpus;
pub mod eval;
pub mod extent;
pub mod nlp;
pub mod pipeline;
pub mod syntax;
pub mod target;
pub mod tree;
