pub mod automaton;
pub mod cli;
pub mod frontend;
pub mod gamesem;
pub mod opsem;
pub mod security;
