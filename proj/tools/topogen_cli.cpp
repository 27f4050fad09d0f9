// Copyright 2026 The topogen Authors.
// SPDX-License-Identifier: Apache-2.0

#include "topogen/cli.hpp"

int main(int argc, char** argv) { return topogen::run_cli(argc, argv); }
