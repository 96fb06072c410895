pub mod concentration;
pub mod find;
pub mod gen_set;
pub mod hyperplane;
pub mod metsch;
pub mod niveau;
pub mod sweep;
