/*
 * Copyright 2026 The repeat-xai Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef REPEAT_CLI_CLI_H_
#define REPEAT_CLI_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace repeat::cli {

// Entry point of the `repeat` tool. args[0] is the program name. Returns the
// process exit code: 0 on success, 1 on a pipeline error, CLI11's code on a
// usage error.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace repeat::cli

#endif  // REPEAT_CLI_CLI_H_
