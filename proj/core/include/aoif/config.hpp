#ifndef AOIF_CONFIG_HPP
#define AOIF_CONFIG_HPP

#include <string>

#include "aoif/model.hpp"

namespace aoif {

// Parses a system description of the form
//   {"sources": [{"lambda": 1.0,
//                 "service": {"type": "erlang", "mean": 0.5, "order": 4},
//                 "error_prob": 0.0, "retx_prob": 0.0}, ...],
//    "preemption": [[...]] or {"preset": "global"},
//    "tagged": 1}
// Service forms: erlang{mean,order}, hyperexp_balanced{mean,scv},
// fit{mean,scv}, ph{sigma,S}. Throws ConfigError carrying the field path.
SystemSpec parse_system_config(const std::string& json_text);

SystemSpec load_system_config(const std::string& path);

}  // namespace aoif

#endif
