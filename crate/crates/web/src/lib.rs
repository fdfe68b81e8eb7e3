//! WebAssembly bindings for the browser demo in `www/`. Every function
//! returns JSON text; errors become JavaScript exceptions.

pub mod table;
pub mod tools;

use headsup_core::ActionKind;
use serde::Serialize;
use wasm_bindgen::prelude::*;

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("views serialize")
}

fn fail(msg: String) -> JsError {
    JsError::new(&msg)
}

#[wasm_bindgen]
pub struct HotSeat(table::Table);

#[wasm_bindgen]
impl HotSeat {
    #[wasm_bindgen(constructor)]
    pub fn new(
        stack: u32,
        sb: u32,
        bb: u32,
        physical: bool,
        seed: u32,
    ) -> Result<HotSeat, JsError> {
        let config = table::config(stack.into(), sb.into(), bb.into(), physical, seed.into());
        table::Table::new(config).map(HotSeat).map_err(fail)
    }

    pub fn view(&self) -> String {
        to_json(&self.0.view())
    }

    #[wasm_bindgen(js_name = nextHand)]
    pub fn next_hand(&mut self) -> Result<String, JsError> {
        self.0.next_hand().map_err(fail)?;
        Ok(self.view())
    }

    /// `kind` is `fold`, `check`, `call`, `bet` or `raise`.
    pub fn act(&mut self, kind: &str, amount: Option<u32>) -> Result<String, JsError> {
        let kind: ActionKind = serde_json::from_value(serde_json::Value::String(kind.into()))
            .map_err(|e| fail(e.to_string()))?;
        self.0.act(kind, amount.map(Into::into)).map_err(fail)?;
        Ok(self.view())
    }

    /// `winner` is `0`, `1` or `chop`.
    pub fn declare(&mut self, winner: &str) -> Result<String, JsError> {
        self.0
            .declare(table::seat_or_chop(winner).map_err(fail)?)
            .map_err(fail)?;
        Ok(self.view())
    }
}

#[wasm_bindgen]
pub fn evaluate(cards: &str) -> Result<String, JsError> {
    tools::evaluate_text(cards)
        .map(|v| v.to_string())
        .map_err(fail)
}

#[wasm_bindgen]
pub fn compare(board: &str, a: &str, b: &str) -> Result<String, JsError> {
    tools::compare_text(board, a, b)
        .map(|v| v.to_string())
        .map_err(fail)
}

#[wasm_bindgen]
pub fn explore(street: &str, stack_bb: u32, sb: u32, bb: u32) -> Result<String, JsError> {
    tools::explore_text(street, stack_bb.into(), sb.into(), bb.into())
        .map(|v| v.to_string())
        .map_err(fail)
}
