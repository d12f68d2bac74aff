#pragma once
// Umbrella header.

#include <nrsense/closedform.hpp>
#include <nrsense/fisher.hpp>
#include <nrsense/model.hpp>
#include <nrsense/moments.hpp>
#include <nrsense/oracle.hpp>
#include <nrsense/runner.hpp>
#include <nrsense/scenario.hpp>
#include <nrsense/svg.hpp>
#include <nrsense/table.hpp>
#include <nrsense/trajectory.hpp>
#include <nrsense/verify.hpp>
