# Campaign orchestration: settings, trial pool and the campaign runner
