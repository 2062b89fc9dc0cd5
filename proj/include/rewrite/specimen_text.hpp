#pragma once

// Program sources embedded at configure time from programs/*.gpr.
namespace rewrite::specimen_text {

const char* is_discrete();
const char* is_connected_old();
const char* is_connected();
const char* is_dag();
const char* bellman_ford();
const char* transitive_closure();

}  // namespace rewrite::specimen_text
