pub mod braidaction;
pub mod coeffield;
pub mod expr;
pub mod lusztig;
pub mod parser;
pub mod qsp;
pub mod rep_oracle;
pub mod rootdata;
pub mod suites;
pub mod uqcore;
