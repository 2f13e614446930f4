#pragma once

#include <span>
#include <string>

namespace fpx {

/// Stacks existing CSV outputs into one long table
/// `source,row,column,value`, one line per cell, inputs in the given order.
/// Values are copied verbatim.
void write_report(std::span<const std::string> inputs, const std::string& out_path);

}  // namespace fpx
