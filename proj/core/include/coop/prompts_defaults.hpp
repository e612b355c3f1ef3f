#pragma once

namespace coop::defaults {

extern const char* kPlanningBase;
extern const char* kPlanningImproved;
extern const char* kPlanningStructured;
extern const char* kCommSkeleton;
extern const char* kCommInstructionBase;
extern const char* kCommInstructionConcise;
extern const char* kCommExampleOneShot;
extern const char* kCommExampleMultiShot;
extern const char* kActionBase;
extern const char* kActionOneShotExample;

}  // namespace coop::defaults
