// Copyright 2026 The inferopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>

#include "inferopt/cascade.hpp"
#include "inferopt/topk.hpp"

namespace inferopt {

/// JSON round trip for trained configs. Model payloads are embedded as
/// opaque base64; measured cost fields live under a "timing" object so that
/// deterministic fields can be compared across runs. Loading rebuilds the
/// bundle named in the file (make_bundle) to decode payloads; callers
/// re-create the same bundle from config.bundle_name.

std::string cascade_config_to_json(const CascadeConfig& cfg, const ModelBundle& bundle);
CascadeConfig cascade_config_from_json(const std::string& text);

std::string topk_config_to_json(const TopKConfig& cfg, const ModelBundle& bundle);
TopKConfig topk_config_from_json(const std::string& text);

/// Peeks at the "kind" field: "cascade" or "topk".
std::string config_kind(const std::string& text);

}  // namespace inferopt
