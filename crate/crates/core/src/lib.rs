pub mod algebra;
pub mod cli;
pub mod etale;
pub mod wedderburn;
pub mod exact;
pub mod groups;
pub mod hopf;
pub mod theta;
