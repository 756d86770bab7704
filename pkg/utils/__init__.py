# Error reporting and logging shared by the engine and the front end
