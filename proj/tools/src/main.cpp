// Copyright 2026 The hrwarp Authors
// SPDX-License-Identifier: Apache-2.0
#include "commands.hpp"

int main(int argc, char** argv) { return hrwarp::cli::run(argc, argv); }
