/*
 * Copyright (C) 2026 The Androscan Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef ANDROSCAN_EMBEDDED_H_
#define ANDROSCAN_EMBEDDED_H_

#include <optional>
#include <string_view>

namespace androscan {

// Returns the bundled copy of a core/data file by basename
// ("vendors.txt", "bank.json", ...), or nullopt.
std::optional<std::string_view> EmbeddedFile(std::string_view name);

}  // namespace androscan

#endif  // ANDROSCAN_EMBEDDED_H_
