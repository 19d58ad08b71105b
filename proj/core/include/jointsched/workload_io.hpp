/* Copyright 2026 The jointsched Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

   http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "jointsched/types.hpp"

namespace jointsched {

// Workload file: a JSON object with exactly the keys "jobs", "cluster" and
// "techniques". Unknown keys anywhere are rejected with Error{kParseError};
// the parsed workload is passed through validate_workload.
Workload parse_workload(std::string_view json_text);
Workload load_workload(const std::filesystem::path& path);

std::string dump_workload(const Workload& workload);
void save_workload(const Workload& workload, const std::filesystem::path& path);

}  // namespace jointsched
