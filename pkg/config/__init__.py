# Engine settings and pre-session checks
