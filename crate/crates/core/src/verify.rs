// populated after the rewrite module is complete
