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

#ifndef ANDROSCAN_JSON_UTIL_H_
#define ANDROSCAN_JSON_UTIL_H_

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "androscan/axml.h"
#include "androscan/endpoint.h"
#include "androscan/report.h"
#include "androscan/scanner.h"

namespace androscan {

using Json = nlohmann::json;

// Canonical form shared by every on-disk artifact.
std::string DumpCanonical(const Json& j);
// Throws Error(kFileUnreadable | kInvalidArgument).
Json ReadJsonFile(const std::filesystem::path& path);
// Throws Error(kIoError).
void WriteTextFile(const std::filesystem::path& path, const std::string& text);
std::string ReadTextFile(const std::filesystem::path& path);

void to_json(Json& j, const ParamDescriptor& p);
void from_json(const Json& j, ParamDescriptor& p);
void to_json(Json& j, const Endpoint& e);
void from_json(const Json& j, Endpoint& e);
void to_json(Json& j, const Finding& f);
void from_json(const Json& j, Finding& f);
void to_json(Json& j, const ScanNote& n);
void from_json(const Json& j, ScanNote& n);
void to_json(Json& j, const ManifestInfo& m);
void from_json(const Json& j, ManifestInfo& m);
void to_json(Json& j, const ReportSecret& s);
void from_json(const Json& j, ReportSecret& s);
void to_json(Json& j, const EncryptedParam& p);
void from_json(const Json& j, EncryptedParam& p);
void to_json(Json& j, const EntryPointUse& u);
void from_json(const Json& j, EntryPointUse& u);
void to_json(Json& j, const Report& r);
void from_json(const Json& j, Report& r);

}  // namespace androscan

#endif  // ANDROSCAN_JSON_UTIL_H_
